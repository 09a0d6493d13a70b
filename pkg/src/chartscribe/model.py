"""Shared domain types and their invariants.

Everything here is immutable after construction and free of I/O; parsing
lives in :mod:`chartscribe.ingestion`, computation in
:mod:`chartscribe.facts`.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Optional, Union

from .errors import (
    BundleValidationError,
    DuplicateColumnError,
    EmptyTableError,
    RaggedRowError,
    UnknownChartTypeError,
)

# A table cell: text (categorical), finite number (numeric), timestamp
# (temporal), or None for a missing numeric/temporal value.  Missing
# categorical cells are the empty string so row indices stay stable.
Cell = Union[str, float, datetime, None]


class ChartType(Enum):
    BAR = "bar"
    SPLIT_BAR = "split-bar"
    STACKED_BAR = "stacked-bar"
    GROUPED_BAR = "grouped-bar"
    COLUMN = "column"
    GROUPED_COLUMN = "grouped-column"
    STACKED_COLUMN = "stacked-column"
    LINE = "line"
    AREA = "area"
    PIE = "pie"


# Accepted metadata "type" strings per variant (see docs/bundle_format.md).
# Datawrapper-style identifiers map onto the closed taxonomy above.
CHART_TYPE_ALIASES: dict[str, ChartType] = {
    "bar": ChartType.BAR,
    "bars": ChartType.BAR,
    "d3-bars": ChartType.BAR,
    "split-bar": ChartType.SPLIT_BAR,
    "split-bars": ChartType.SPLIT_BAR,
    "d3-bars-split": ChartType.SPLIT_BAR,
    "stacked-bar": ChartType.STACKED_BAR,
    "stacked-bars": ChartType.STACKED_BAR,
    "d3-bars-stacked": ChartType.STACKED_BAR,
    "grouped-bar": ChartType.GROUPED_BAR,
    "grouped-bars": ChartType.GROUPED_BAR,
    "d3-bars-grouped": ChartType.GROUPED_BAR,
    "column": ChartType.COLUMN,
    "columns": ChartType.COLUMN,
    "column-chart": ChartType.COLUMN,
    "d3-columns": ChartType.COLUMN,
    "grouped-column": ChartType.GROUPED_COLUMN,
    "grouped-columns": ChartType.GROUPED_COLUMN,
    "grouped-column-chart": ChartType.GROUPED_COLUMN,
    "d3-columns-grouped": ChartType.GROUPED_COLUMN,
    "stacked-column": ChartType.STACKED_COLUMN,
    "stacked-columns": ChartType.STACKED_COLUMN,
    "stacked-column-chart": ChartType.STACKED_COLUMN,
    "d3-columns-stacked": ChartType.STACKED_COLUMN,
    "line": ChartType.LINE,
    "lines": ChartType.LINE,
    "d3-lines": ChartType.LINE,
    "area": ChartType.AREA,
    "area-chart": ChartType.AREA,
    "d3-area": ChartType.AREA,
    "pie": ChartType.PIE,
    "pie-chart": ChartType.PIE,
    "d3-pies": ChartType.PIE,
}

# Chart types whose data is inherently multivariate.
MULTIVARIATE_TYPES = frozenset({
    ChartType.SPLIT_BAR,
    ChartType.STACKED_BAR,
    ChartType.GROUPED_BAR,
    ChartType.GROUPED_COLUMN,
    ChartType.STACKED_COLUMN,
})


def chart_type_from_text(text: str) -> ChartType:
    """Map a metadata type string onto the closed taxonomy."""
    try:
        return CHART_TYPE_ALIASES[text.strip().lower()]
    except KeyError:
        raise UnknownChartTypeError(text) from None


class SortOrder(Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


class ColumnKind(Enum):
    CATEGORICAL = "categorical"
    NUMERIC = "numeric"
    TEMPORAL = "temporal"


class AxisRole(Enum):
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: ColumnKind


@dataclass(frozen=True)
class ChartMetadata:
    id: str
    title: str
    chart_type: ChartType
    created_at: datetime
    subtitle: Optional[str] = None
    footnote: Optional[str] = None
    axis_labels: dict[AxisRole, Optional[str]] = field(default_factory=dict)
    declared_sorted: Optional[SortOrder] = None
    source_note: Optional[str] = None


@dataclass(frozen=True)
class DataTable:
    columns: tuple[ColumnSpec, ...]
    rows: tuple[tuple[Cell, ...], ...]

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.columns):
            if col.name == name:
                return i
        raise KeyError(name)

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]


@dataclass(frozen=True)
class Series:
    """Canonical per-variable view of a table column.

    ``x`` holds ordinal indices for categorical axes, numbers for numeric
    axes, and timestamps for temporal axes; ``labels`` carries the display
    text for each point so facts can name data points without going back
    to the table.  ``source_rows`` maps each point to its table row.
    """

    label: str
    x: tuple
    y: tuple[float, ...]
    x_kind: ColumnKind
    labels: tuple[str, ...]
    source_rows: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.y)


class FeatureCategory(Enum):
    GENERAL_INFO = "general_info"
    DATA_FACT = "data_fact"
    CONTEXT = "context"


# Fixed category colors, anchored to the CSS3 names "pink" and "green".
CATEGORY_COLORS: dict[FeatureCategory, str] = {
    FeatureCategory.GENERAL_INFO: "#FFC0CB",
    FeatureCategory.DATA_FACT: "#008000",
    FeatureCategory.CONTEXT: "#D3D3D3",
}


class AnchorTarget(Enum):
    DATA_POINT = "data_point"
    COLUMN = "column"
    AXIS = "axis"
    TITLE_BLOCK = "title_block"
    WHOLE_CHART = "whole_chart"


@dataclass(frozen=True)
class AnchorRef:
    target: AnchorTarget
    row: Optional[int] = None
    column: Optional[str] = None
    axis: Optional[AxisRole] = None

    @staticmethod
    def data_point(row: int, column: str) -> "AnchorRef":
        return AnchorRef(AnchorTarget.DATA_POINT, row=row, column=column)

    @staticmethod
    def whole_column(column: str) -> "AnchorRef":
        return AnchorRef(AnchorTarget.COLUMN, column=column)

    @staticmethod
    def axis_ref(axis: AxisRole) -> "AnchorRef":
        return AnchorRef(AnchorTarget.AXIS, axis=axis)

    @staticmethod
    def title_block() -> "AnchorRef":
        return AnchorRef(AnchorTarget.TITLE_BLOCK)

    @staticmethod
    def whole_chart() -> "AnchorRef":
        return AnchorRef(AnchorTarget.WHOLE_CHART)


@dataclass(frozen=True)
class Feature:
    feature_id: str
    category: FeatureCategory
    label: str
    requires_variable: bool
    payload: dict
    anchors: tuple[AnchorRef, ...]

    @property
    def display_color(self) -> str:
        return CATEGORY_COLORS[self.category]


@dataclass(frozen=True)
class DescriptionSegment:
    feature_id: str
    text: str
    anchors: tuple[AnchorRef, ...]
    order_index: int
    edited: bool = False


@dataclass(frozen=True)
class SelectionState:
    selected_feature_ids: tuple[str, ...] = ()
    variable_choices: dict[str, list[str]] = field(default_factory=dict)
    context_text: Optional[str] = None
    manual_edits: dict[str, str] = field(default_factory=dict)


def anchor_resolves(anchor: AnchorRef, table: DataTable) -> bool:
    """True when the anchor's row/column references exist in the table."""
    if anchor.target is AnchorTarget.DATA_POINT:
        if anchor.row is None or anchor.column is None:
            return False
        if not 0 <= anchor.row < len(table.rows):
            return False
        return anchor.column in table.column_names()
    if anchor.target is AnchorTarget.COLUMN:
        return anchor.column is not None and anchor.column in table.column_names()
    if anchor.target is AnchorTarget.AXIS:
        return anchor.axis is not None
    return True  # TitleBlock / WholeChart always resolve


def validate_bundle(bundle):
    """Check every structural invariant; return the bundle unchanged.

    Accepts a bundle whose ``chart_type`` is still raw text (as built by
    hand) and normalizes it onto the enum.  Raises the first violated
    invariant as a structured error; validating an already-valid bundle is
    a no-op, so the call is idempotent.
    """
    meta = bundle.metadata
    if isinstance(meta.chart_type, str):
        # Normalize hand-built bundles; parse paths arrive with the enum.
        meta = dataclasses.replace(meta, chart_type=chart_type_from_text(meta.chart_type))
        bundle = dataclasses.replace(bundle, metadata=meta)
    elif not isinstance(meta.chart_type, ChartType):
        raise UnknownChartTypeError(repr(meta.chart_type))

    table = bundle.table
    if not table.columns or not table.rows:
        raise EmptyTableError("table needs at least one column and one row")

    seen: set[str] = set()
    for col in table.columns:
        if col.name in seen:
            raise DuplicateColumnError(col.name)
        seen.add(col.name)

    width = len(table.columns)
    for i, row in enumerate(table.rows):
        if len(row) != width:
            raise RaggedRowError(i, expected=width, got=len(row))

    for col_idx, col in enumerate(table.columns):
        if col.kind is ColumnKind.NUMERIC:
            for i, row in enumerate(table.rows):
                v = row[col_idx]
                if v is not None and (not isinstance(v, (int, float)) or not math.isfinite(v)):
                    raise BundleNumericCellError(col.name, i, v)

    if bundle.svg_text is None and bundle.extracted_colors:
        raise BundleColorInvariantError()

    return bundle


class BundleNumericCellError(BundleValidationError):
    def __init__(self, column: str, row: int, value):
        self.column = column
        self.row = row
        super().__init__(f"non-finite value in numeric column {column!r} row {row}: {value!r}")


class BundleColorInvariantError(BundleValidationError):
    def __init__(self):
        super().__init__("extracted_colors must be empty without svg_text")
