from datetime import datetime

import pytest

from chartscribe.errors import (
    DuplicateColumnError,
    EmptyTableError,
    RaggedRowError,
    UnknownChartTypeError,
)
from chartscribe.ingestion import ChartBundle
from chartscribe.model import (
    MULTIVARIATE_TYPES,
    AnchorRef,
    AxisRole,
    ChartMetadata,
    ChartType,
    ColumnKind,
    ColumnSpec,
    DataTable,
    FeatureCategory,
    anchor_resolves,
    chart_type_from_text,
    validate_bundle,
)


def make_metadata(**overrides) -> ChartMetadata:
    base = dict(
        id="t",
        title="T",
        chart_type=ChartType.BAR,
        created_at=datetime(2024, 1, 1),
        subtitle=None,
        footnote=None,
        axis_labels={},
        declared_sorted=None,
        source_note=None,
    )
    base.update(overrides)
    return ChartMetadata(**base)


def make_bundle(columns, rows, **meta_overrides) -> ChartBundle:
    table = DataTable(columns=tuple(columns), rows=tuple(tuple(r) for r in rows))
    return ChartBundle(metadata=make_metadata(**meta_overrides), table=table)


CAT = lambda name: ColumnSpec(name, ColumnKind.CATEGORICAL)
NUM = lambda name: ColumnSpec(name, ColumnKind.NUMERIC)


class TestChartTypes:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("bar", ChartType.BAR),
            ("Bar", ChartType.BAR),
            ("  line ", ChartType.LINE),
            ("d3-lines", ChartType.LINE),
            ("stacked-bars", ChartType.STACKED_BAR),
            ("grouped-column-chart", ChartType.GROUPED_COLUMN),
            ("column", ChartType.COLUMN),
            ("pie", ChartType.PIE),
        ],
    )
    def test_aliases(self, text, expected):
        assert chart_type_from_text(text) is expected

    def test_unknown_type_raises(self):
        with pytest.raises(UnknownChartTypeError):
            chart_type_from_text("hexbin")

    def test_multivariate_set(self):
        assert ChartType.GROUPED_COLUMN in MULTIVARIATE_TYPES
        assert ChartType.STACKED_BAR in MULTIVARIATE_TYPES
        assert ChartType.SPLIT_BAR in MULTIVARIATE_TYPES
        assert ChartType.LINE not in MULTIVARIATE_TYPES
        assert ChartType.PIE not in MULTIVARIATE_TYPES


class TestValidateBundle:
    def test_valid_passes_unchanged(self):
        bundle = make_bundle([CAT("City"), NUM("Pop")], [("Oslo", 0.7)])
        assert validate_bundle(bundle).table is bundle.table

    def test_text_chart_type_normalized(self):
        bundle = make_bundle([CAT("A"), NUM("B")], [("x", 1.0)], chart_type="stacked-bars")
        assert validate_bundle(bundle).metadata.chart_type is ChartType.STACKED_BAR

    def test_empty_table(self):
        with pytest.raises(EmptyTableError):
            validate_bundle(make_bundle([CAT("A")], []))

    def test_duplicate_columns(self):
        with pytest.raises(DuplicateColumnError):
            validate_bundle(make_bundle([CAT("A"), NUM("A")], [("x", 1.0)]))

    def test_ragged_row(self):
        with pytest.raises(RaggedRowError) as info:
            validate_bundle(make_bundle([CAT("A"), NUM("B")], [("x", 1.0), ("y",)]))
        assert info.value.row_index == 1

    def test_colors_without_svg_rejected(self):
        table = DataTable(columns=(CAT("A"), NUM("B")), rows=(("x", 1.0),))
        bundle = ChartBundle(
            metadata=make_metadata(), table=table, svg_text=None, extracted_colors=("#FF0000",)
        )
        with pytest.raises(Exception):
            validate_bundle(bundle)


class TestAnchors:
    table = DataTable(columns=(CAT("City"), NUM("Pop")), rows=(("Oslo", 0.7), ("Bergen", 0.29)))

    def test_data_point_resolves(self):
        assert anchor_resolves(AnchorRef.data_point(1, "Pop"), self.table)

    def test_data_point_out_of_range(self):
        assert not anchor_resolves(AnchorRef.data_point(2, "Pop"), self.table)

    def test_unknown_column(self):
        assert not anchor_resolves(AnchorRef.whole_column("Nope"), self.table)

    def test_whole_chart_always_resolves(self):
        assert anchor_resolves(AnchorRef.whole_chart(), self.table)
        assert anchor_resolves(AnchorRef.title_block(), self.table)
        assert anchor_resolves(AnchorRef.axis_ref(AxisRole.INDEPENDENT), self.table)


class TestCategoryColors:
    def test_display_colors(self):
        from chartscribe.model import CATEGORY_COLORS

        assert CATEGORY_COLORS[FeatureCategory.GENERAL_INFO] == "#FFC0CB"
        assert CATEGORY_COLORS[FeatureCategory.DATA_FACT] == "#008000"
        assert CATEGORY_COLORS[FeatureCategory.CONTEXT] == "#D3D3D3"
