import math

import pytest

from chartscribe.errors import (
    InvalidPermutationError,
    MalformedDocumentError,
    MissingVariableChoiceError,
    NonFiniteError,
    UnboundPlaceholderError,
    UnknownFeatureEditError,
    UnknownVariableError,
)
from chartscribe.features import detect_features
from chartscribe.model import SelectionState
from chartscribe.textgen import (
    FormatConfig,
    compose_description,
    fill,
    format_number,
    full_selection,
    join_natural,
    load_templates,
    parse_templates,
    render_feature,
    update_for_variables,
)

MINUS = "−"


class TestFormatNumber:
    @pytest.mark.parametrize(
        "value,expected",
        [
            (3, "3"),
            (3.0, "3"),
            (0.5, "0.5"),
            (2.675, "2.68"),
            (-2.675, MINUS + "2.68"),
            (1234.5, "1234.5"),
            (0.004, "0"),
            (-0.004, "0"),
            (0, "0"),
            (-0.0, "0"),
            (23.4, "23.4"),
            (100.0, "100"),
            (0.125, "0.13"),
            (1e-15, "0"),
        ],
    )
    def test_table(self, value, expected):
        assert format_number(value) == expected

    def test_max_decimals_config(self):
        assert format_number(2.675, FormatConfig(max_decimals=3)) == "2.675"
        assert format_number(0.5, FormatConfig(max_decimals=0)) == "1"

    @pytest.mark.parametrize("value", [math.nan, math.inf, -math.inf])
    def test_non_finite(self, value):
        with pytest.raises(NonFiniteError):
            format_number(value)

    def test_half_up_not_bankers(self):
        # round() would give 2 here; half-up must give 3.
        assert format_number(2.5, FormatConfig(max_decimals=0)) == "3"
        assert format_number(0.005) == "0.01"


class TestJoinNatural:
    def test_empty(self):
        assert join_natural([]) == ""

    def test_one(self):
        assert join_natural(["a"]) == "a"

    def test_two(self):
        assert join_natural(["a", "b"]) == "a and b"

    def test_many(self):
        assert join_natural(["a", "b", "c"]) == "a, b and c"


class TestTemplates:
    def test_parse_basic(self):
        catalog = parse_templates("a.b=Hello {x}\n# comment\n\nc=Plain")
        assert catalog.resolve("a.b") == "Hello {x}"
        assert catalog.resolve("c") == "Plain"

    def test_parse_value_may_contain_equals(self):
        catalog = parse_templates("k=r = {r}")
        assert catalog.resolve("k") == "r = {r}"

    def test_parse_malformed(self):
        with pytest.raises(MalformedDocumentError):
            parse_templates("no separator here")

    def test_resolve_condition_falls_back(self):
        catalog = parse_templates("k=base\nk.special=variant")
        assert catalog.resolve("k", "special") == "variant"
        assert catalog.resolve("k", "other") == "base"

    def test_resolve_unknown_key(self):
        with pytest.raises(KeyError):
            parse_templates("k=v").resolve("missing")

    def test_fill(self):
        assert fill("{a} and {b}", {"a": "1", "b": "2"}) == "1 and 2"

    def test_fill_unbound(self):
        with pytest.raises(UnboundPlaceholderError):
            fill("{a} {oops}", {"a": "1"})

    def test_default_catalog_loads(self):
        catalog = load_templates()
        assert "{chart_type}" in catalog.resolve("general.type")


class TestRenderGeneral:
    def test_type_article(self, bundles):
        line = detect_features(bundles["line-gdp"])
        assert render_feature(line.get("general.type")) == "This is a line chart."
        area = detect_features(bundles["area-temperature"])
        assert render_feature(area.get("general.type")) == "This is an area chart."

    def test_title(self, line_bundle):
        catalog = detect_features(line_bundle)
        text = render_feature(catalog.get("general.title"))
        assert text == 'The chart is titled "GDP per capita growth".'

    def test_axes(self, line_bundle):
        catalog = detect_features(line_bundle)
        text = render_feature(catalog.get("general.axes"))
        assert "Year" in text and "Growth (%)" in text

    def test_colors_with_mapping(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        text = render_feature(catalog.get("general.colors"))
        assert "Exports" in text and "steelblue" in text

    def test_dropped_singular(self, bundles):
        catalog = detect_features(bundles["area-temperature"])
        text = render_feature(catalog.get("general.dropped"))
        assert "one data point" in text
        assert "points" not in text

    def test_sorting_match(self, bar_bundle):
        catalog = detect_features(bar_bundle)
        text = render_feature(catalog.get("general.sorting"))
        assert "descending" in text


class TestRenderFacts:
    def test_extrema_univariate(self, line_bundle):
        catalog = detect_features(line_bundle)
        text = render_feature(catalog.get("fact.extrema"))
        assert text == (
            "The highest value is 23.4 (2019); the lowest value is 12.1 (2014)."
        )

    def test_trend_intervals(self, line_bundle):
        catalog = detect_features(line_bundle)
        text = render_feature(catalog.get("fact.trend"))
        assert "rises from 2014 to 2019" in text
        assert "falls from 2019 to 2020" in text

    def test_trend_monotonic_phrase(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        text = render_feature(catalog.get("fact.trend"), variables=["Exports"])
        assert "increases" in text
        assert "120" in text and "180" in text

    def test_outliers_single(self, bar_bundle):
        catalog = detect_features(bar_bundle)
        text = render_feature(catalog.get("fact.outliers"))
        assert "0.7" in text and "Oslo" in text

    def test_pie(self, pie_bundle):
        catalog = detect_features(pie_bundle)
        text = render_feature(catalog.get("fact.pie"))
        assert "Housing" in text and "35%" in text
        assert "Other" in text and "10%" in text

    def test_correlation_strength_wording(self, line_bundle):
        catalog = detect_features(line_bundle)
        text = render_feature(catalog.get("fact.correlation"))
        assert "moderate positive" in text
        assert "r = 0.78" in text

    def test_minus_sign_in_output(self, bundles):
        catalog = detect_features(bundles["area-temperature"])
        text = render_feature(catalog.get("fact.extrema"))
        assert MINUS + "3.2" in text
        assert "-3.2" not in text


class TestVariableChoices:
    def test_requires_variable_enforced(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        with pytest.raises(MissingVariableChoiceError):
            render_feature(catalog.get("fact.extrema"))

    def test_unknown_variable_rejected(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        with pytest.raises(UnknownVariableError):
            render_feature(catalog.get("fact.extrema"), variables=["Year"])

    def test_single_choice_wrapped(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        text = render_feature(catalog.get("fact.extrema"), variables=["Imports"])
        assert text.startswith("For Imports, the highest value")

    def test_two_choices_two_sentences(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        text = update_for_variables(
            catalog.get("fact.extrema"), ["Exports", "Services"]
        )
        assert text.count("For ") == 2
        assert text.index("Exports") < text.index("Services")

    def test_comparison_pair(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        text = render_feature(
            catalog.get("fact.comparison"), variables=["Exports", "Imports"]
        )
        assert "Exports is higher than Imports in 4 of 5 rows" in text
        assert "20" in text and "2021" in text

    def test_comparison_defaults_to_only_pair(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        feature = catalog.get("fact.comparison")
        with pytest.raises(MissingVariableChoiceError):
            render_feature(feature, variables=["Exports"])


class TestComposeDescription:
    def test_order_follows_selection(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("fact.extrema", "general.type"),
            variable_choices={},
            manual_edits={},
            context_text="",
        )
        desc = compose_description(catalog, selection)
        assert [s.feature_id for s in desc.segments] == ["fact.extrema", "general.type"]
        assert desc.text.startswith("The highest value")
        assert desc.text.endswith("This is a line chart.")
        assert [s.order_index for s in desc.segments] == [0, 1]

    def test_duplicate_ids_rejected(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("general.type", "general.type"),
            variable_choices={},
            manual_edits={},
            context_text="",
        )
        with pytest.raises(InvalidPermutationError):
            compose_description(catalog, selection)

    def test_unknown_id_rejected(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("nope",),
            variable_choices={},
            manual_edits={},
            context_text="",
        )
        with pytest.raises(InvalidPermutationError):
            compose_description(catalog, selection)

    def test_manual_edit_replaces_text_keeps_anchors(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("fact.extrema",),
            variable_choices={},
            manual_edits={"fact.extrema": "Custom sentence."},
            context_text="",
        )
        desc = compose_description(catalog, selection)
        segment = desc.segments[0]
        assert segment.text == "Custom sentence."
        assert segment.edited is True
        assert segment.anchors == catalog.get("fact.extrema").anchors

    def test_edit_for_unselected_feature_rejected(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("general.type",),
            variable_choices={},
            manual_edits={"fact.extrema": "x"},
            context_text="",
        )
        with pytest.raises(UnknownFeatureEditError):
            compose_description(catalog, selection)

    def test_empty_context_skipped(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("general.type", "context.note"),
            variable_choices={},
            manual_edits={},
            context_text="",
        )
        desc = compose_description(catalog, selection)
        assert [s.feature_id for s in desc.segments] == ["general.type"]

    def test_context_with_text(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=("context.note",),
            variable_choices={},
            manual_edits={},
            context_text="Data revised in 2024.",
        )
        desc = compose_description(catalog, selection)
        assert desc.text == "Data revised in 2024."

    def test_empty_selection_empty_text(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = SelectionState(
            selected_feature_ids=(),
            variable_choices={},
            manual_edits={},
            context_text="",
        )
        desc = compose_description(catalog, selection)
        assert desc.segments == ()
        assert desc.text == ""

    def test_variable_choice_applied(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        selection = SelectionState(
            selected_feature_ids=("fact.extrema",),
            variable_choices={"fact.extrema": ("Services",)},
            manual_edits={},
            context_text="",
        )
        desc = compose_description(catalog, selection)
        assert desc.text.startswith("For Services,")


class TestFullSelection:
    def test_covers_catalog_minus_context(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = full_selection(catalog)
        expected = [f for f in catalog.feature_ids() if f != "context.note"]
        assert list(selection.selected_feature_ids) == expected

    def test_context_included_with_text(self, line_bundle):
        catalog = detect_features(line_bundle)
        selection = full_selection(catalog, context_text="Note.")
        assert selection.selected_feature_ids[-1] == "context.note"
        assert selection.context_text == "Note."

    def test_multivariate_choices_filled(self, grouped_bundle):
        catalog = detect_features(grouped_bundle)
        selection = full_selection(catalog)
        assert selection.variable_choices["fact.extrema"] == ["Exports"]
        assert selection.variable_choices["fact.comparison"] == ["Exports", "Imports"]
        # The composed full description must render without errors.
        desc = compose_description(catalog, selection)
        assert desc.text

    def test_full_description_every_fixture(self, bundles):
        for bundle in bundles.values():
            catalog = detect_features(bundle)
            desc = compose_description(catalog, full_selection(catalog))
            assert desc.text.strip()
            assert desc.text == " ".join(s.text for s in desc.segments)
