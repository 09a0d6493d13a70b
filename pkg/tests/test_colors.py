import csv
import random
from importlib import resources

import pytest

from chartscribe.colors import (
    LabColor,
    css3_palette,
    delta_e76,
    name_chart_colors,
    nearest_color_name,
    srgb_to_lab,
    srgb_to_xyz,
    xyz_to_lab,
)
from chartscribe.errors import InvalidHexError

from oracles import lab_oracle, nearest_name_oracle


def palette_rows() -> list[tuple[str, str]]:
    source = resources.files("chartscribe").joinpath("assets/css3_colors.csv")
    with source.open("r", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        return [(row["name"], row["hex"]) for row in reader]


class TestLabConversion:
    def test_white(self):
        lab = srgb_to_lab("#FFFFFF")
        assert lab.L == pytest.approx(100.0, abs=1e-3)
        assert lab.a == pytest.approx(0.0, abs=1e-3)
        assert lab.b == pytest.approx(0.0, abs=1e-3)

    def test_black(self):
        lab = srgb_to_lab("#000000")
        assert (lab.L, lab.a, lab.b) == pytest.approx((0.0, 0.0, 0.0), abs=1e-3)

    def test_red_against_oracle(self):
        lab = srgb_to_lab("#FF0000")
        assert lab.L == pytest.approx(53.241, abs=1e-2)
        assert lab.a == pytest.approx(80.092, abs=1e-2)
        assert lab.b == pytest.approx(67.203, abs=1e-2)
        oracle = lab_oracle("#FF0000")
        assert (lab.L, lab.a, lab.b) == pytest.approx(oracle, abs=1e-9)

    def test_staged_equals_composed(self):
        # Numerical-stability check: one-shot conversion vs explicit stages.
        for hex_text in ("#1F77B4", "#ABCDEF", "#00FF7F", "#808080"):
            composed = srgb_to_lab(hex_text)
            staged = xyz_to_lab(srgb_to_xyz(hex_text))
            assert composed.L == pytest.approx(staged.L, abs=1e-6)
            assert composed.a == pytest.approx(staged.a, abs=1e-6)
            assert composed.b == pytest.approx(staged.b, abs=1e-6)

    @pytest.mark.parametrize("bad", ["FF0000", "#FF00", "#GGGGGG", "", "#FF00001"])
    def test_invalid_hex(self, bad):
        with pytest.raises(InvalidHexError):
            srgb_to_lab(bad)


class TestDeltaE:
    def test_zero_for_identical(self):
        lab = srgb_to_lab("#123456")
        assert delta_e76(lab, lab) == 0.0

    def test_euclidean(self):
        a = LabColor(0.0, 0.0, 0.0)
        b = LabColor(3.0, 4.0, 0.0)
        assert delta_e76(a, b) == pytest.approx(5.0)


class TestNearestName:
    def test_exact_member(self):
        assert nearest_color_name("#FF0000") == ("red", 0.0)

    def test_alias_tie_lexicographic(self):
        name, distance = nearest_color_name("#00FFFF")
        assert name == "aqua"
        assert distance == 0.0

    def test_gray_alias_tie(self):
        assert nearest_color_name("#808080")[0] == "gray"

    def test_near_black(self):
        name, distance = nearest_color_name("#000001")
        oracle_name, oracle_distance = nearest_name_oracle("#000001", palette_rows())
        assert name == oracle_name == "black"
        assert distance == pytest.approx(oracle_distance, abs=1e-9)

    def test_palette_size(self):
        assert len(css3_palette()) == 147

    def test_name_chart_colors_preserves_order(self):
        named = name_chart_colors(["#008000", "#FF0000"])
        assert list(named.items()) == [("#008000", "green"), ("#FF0000", "red")]

    def test_name_chart_colors_empty(self):
        assert name_chart_colors([]) == {}

    def test_seeded_sample_against_oracle(self):
        # Small in-suite sample; the full 1000-color run lives in acceptance.
        rng = random.Random(20240311)
        rows = palette_rows()
        for _ in range(25):
            hex_text = "#{:06X}".format(rng.randrange(1 << 24))
            name, distance = nearest_color_name(hex_text)
            oracle_name, oracle_distance = nearest_name_oracle(hex_text, rows)
            assert name == oracle_name
            assert distance == pytest.approx(oracle_distance, abs=1e-9)
