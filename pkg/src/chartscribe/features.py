"""Chart-type-driven feature catalogs.

Builds the checkbox-list data: general information (pink), data facts
(green), and the contextual-knowledge slot, each with chart-element
anchors.  Catalog order is fixed so the UI layout and golden outputs
stay stable: general block, then data facts, then context.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import facts as F
from .errors import UnknownVariableError
from .ingestion import ChartBundle, build_series, format_cell
from .model import (
    MULTIVARIATE_TYPES,
    AnchorRef,
    AxisRole,
    ChartType,
    ColumnKind,
    Feature,
    FeatureCategory,
)
from .colors import name_chart_colors

log = logging.getLogger(__name__)

ZERO_TOL = F.ZERO_TOLERANCE

CONTEXT_FEATURE_ID = "context.note"


@dataclass(frozen=True)
class FeatureCatalog:
    chart_id: str
    features: tuple[Feature, ...]
    variables: tuple[str, ...]

    def feature_ids(self) -> list[str]:
        return [f.feature_id for f in self.features]

    def get(self, feature_id: str) -> Feature:
        for f in self.features:
            if f.feature_id == feature_id:
                return f
        raise KeyError(feature_id)


def applicable_variables(bundle: ChartBundle) -> list[str]:
    """Dependent numeric columns in table order (first column is the axis)."""
    return [
        col.name
        for col in bundle.table.columns[1:]
        if col.kind is ColumnKind.NUMERIC
    ]


def is_multivariate(bundle: ChartBundle) -> bool:
    return (
        bundle.metadata.chart_type in MULTIVARIATE_TYPES
        or len(applicable_variables(bundle)) > 1
    )


def compare_groups(bundle: ChartBundle, var_a: str, var_b: str) -> dict:
    """Row-wise and aggregate comparison of two dependent variables.

    Rows with a missing value on either side are excluded from the counts
    and the gap search and reported as None in the per-row list.
    """
    valid = applicable_variables(bundle)
    for var in (var_a, var_b):
        if var not in valid:
            raise UnknownVariableError(var)
    ia = bundle.table.column_index(var_a)
    ib = bundle.table.column_index(var_b)

    per_row: list = []
    a_larger = 0
    b_larger = 0
    compared = 0
    sum_a = 0.0
    sum_b = 0.0
    max_gap = None
    max_gap_row = None
    for i, row in enumerate(bundle.table.rows):
        a, b = row[ia], row[ib]
        if a is None or b is None:
            per_row.append(None)
            continue
        compared += 1
        sum_a += a
        sum_b += b
        if a > b:
            per_row.append("a")
            a_larger += 1
        elif b > a:
            per_row.append("b")
            b_larger += 1
        else:
            per_row.append("tie")
        gap = abs(a - b)
        if max_gap is None or gap > max_gap:
            max_gap = gap
            max_gap_row = i
    return {
        "var_a": var_a,
        "var_b": var_b,
        "rows_compared": compared,
        "per_row": per_row,
        "a_larger_count": a_larger,
        "b_larger_count": b_larger,
        "mean_a": sum_a / compared if compared else None,
        "mean_b": sum_b / compared if compared else None,
        "max_gap": max_gap,
        "max_gap_row": max_gap_row,
        "max_gap_label": _row_label(bundle, max_gap_row) if max_gap_row is not None else None,
    }


def _row_label(bundle: ChartBundle, row: int) -> str:
    return format_cell(bundle.table.rows[row][0])


def _chart_type_words(chart_type: ChartType) -> str:
    return chart_type.value.replace("-", " ")


def _correlation_strength(r: float) -> str:
    a = abs(r)
    if a >= 0.8:
        return "strong"
    if a >= 0.5:
        return "moderate"
    if a >= 0.2:
        return "weak"
    return "negligible"


def _detect_sort_order(ys: tuple[float, ...]) -> str | None:
    deltas = [b - a for a, b in zip(ys, ys[1:])]
    non_dec = all(d >= -ZERO_TOL for d in deltas)
    non_inc = all(d <= ZERO_TOL for d in deltas)
    if non_dec and non_inc:
        return "constant"
    if non_dec:
        return "ascending"
    if non_inc:
        return "descending"
    return None


def _interval_dict(iv: F.TrendInterval, labels: tuple[str, ...]) -> dict:
    return {
        "start": iv.start,
        "end": iv.end,
        "start_label": labels[iv.start],
        "end_label": labels[iv.end],
        "direction": iv.direction.value,
        "slope": iv.slope,
    }


def _dedupe_anchors(anchors: list[AnchorRef]) -> tuple[AnchorRef, ...]:
    return tuple(dict.fromkeys(anchors))


def detect_features(bundle: ChartBundle, config: F.FactsConfig | None = None) -> FeatureCatalog:
    """Build the full feature catalog for a validated bundle.

    A feature whose computation fails is logged and omitted; the catalog
    itself is always produced.
    """
    config = config or F.FactsConfig()
    meta = bundle.metadata
    variables = applicable_variables(bundle)
    multivariate = is_multivariate(bundle)

    series_by_var: dict[str, tuple] = {}
    facts_by_var: dict[str, F.FactsBundle] = {}
    for var in variables:
        try:
            series_by_var[var] = build_series(bundle, var)
            facts_by_var[var] = F.compute_facts(bundle, var, config)
        except Exception:
            log.warning("dropping variable %r: facts computation failed", var, exc_info=True)
    usable = [v for v in variables if v in facts_by_var]

    features: list[Feature] = []

    def add(feature_id, label, category, payload, anchors, requires_variable=False):
        features.append(
            Feature(
                feature_id=feature_id,
                category=category,
                label=label,
                requires_variable=requires_variable,
                payload=payload,
                anchors=_dedupe_anchors(anchors),
            )
        )

    general = FeatureCategory.GENERAL_INFO
    fact = FeatureCategory.DATA_FACT

    # --- general information block
    add(
        "general.type",
        "Chart type",
        general,
        {"chart_type": meta.chart_type.value, "display": _chart_type_words(meta.chart_type)},
        [AnchorRef.whole_chart()],
    )
    if meta.title:
        add("general.title", "Title", general, {"title": meta.title}, [AnchorRef.title_block()])
    if meta.subtitle:
        add(
            "general.subtitle",
            "Subtitle",
            general,
            {"subtitle": meta.subtitle},
            [AnchorRef.title_block()],
        )
    if meta.footnote:
        add(
            "general.footnote",
            "Footnote",
            general,
            {"footnote": meta.footnote},
            [AnchorRef.whole_chart()],
        )
    if meta.chart_type is not ChartType.PIE:
        independent = meta.axis_labels.get(AxisRole.INDEPENDENT) or bundle.table.columns[0].name
        dependent = meta.axis_labels.get(AxisRole.DEPENDENT) or (
            usable[0] if len(usable) == 1 else "values"
        )
        add(
            "general.axes",
            "Axes",
            general,
            {"independent": independent, "dependent": dependent},
            [AnchorRef.axis_ref(AxisRole.INDEPENDENT), AnchorRef.axis_ref(AxisRole.DEPENDENT)],
        )
    if bundle.extracted_colors:
        try:
            named = name_chart_colors(list(bundle.extracted_colors))
            colors = [{"hex": h, "name": n} for h, n in named.items()]
            mapping = None
            anchors = [AnchorRef.whole_chart()]
            if len(bundle.extracted_colors) == len(usable) and usable:
                mapping = {
                    var: {"hex": h, "name": named[h]}
                    for var, h in zip(usable, bundle.extracted_colors)
                }
                anchors = [AnchorRef.whole_column(var) for var in usable]
            add(
                "general.colors",
                "Color scheme",
                general,
                {"colors": colors, "mapping": mapping},
                anchors,
            )
        except Exception:
            log.warning("omitting general.colors", exc_info=True)
    if usable and len(bundle.table.rows) >= 2:
        scan_var = usable[0]
        series, _ = series_by_var[scan_var]
        detected = _detect_sort_order(series.y)
        declared = meta.declared_sorted.value if meta.declared_sorted else None
        mismatch = declared is not None and detected != "constant" and detected != declared
        add(
            "general.sorting",
            "Sorting",
            general,
            {"column": scan_var, "detected": detected, "declared": declared, "mismatch": mismatch},
            [AnchorRef.whole_column(scan_var)],
        )
    dropped_total = sum(series_by_var[v][1] for v in usable)
    if dropped_total > 0:
        add(
            "general.dropped",
            "Omitted values",
            general,
            {
                "count": dropped_total,
                "per_variable": {v: series_by_var[v][1] for v in usable},
            },
            [AnchorRef.whole_chart()],
        )

    # --- data facts block (payloads keyed by variable)
    if usable:
        def per_var(build):
            payload = {}
            anchors = []
            for var in usable:
                series, _ = series_by_var[var]
                entry, var_anchors = build(var, facts_by_var[var], series)
                if entry is not None:
                    payload[var] = entry
                    anchors.extend(var_anchors)
            return payload, anchors

        def table_row(series, series_index: int) -> int:
            return series.source_rows[series_index]

        def extrema_entry(var, fb, series):
            e = fb.extrema
            return (
                {
                    "max_value": e.max_value,
                    "max_label": e.max_label,
                    "max_row": table_row(series, e.max_row),
                    "min_value": e.min_value,
                    "min_label": e.min_label,
                    "min_row": table_row(series, e.min_row),
                },
                [
                    AnchorRef.data_point(table_row(series, e.max_row), var),
                    AnchorRef.data_point(table_row(series, e.min_row), var),
                ],
            )

        def scalar_entry(key):
            def build(var, fb, series):
                return {key: getattr(fb, key)}, [AnchorRef.whole_column(var)]
            return build

        def outliers_entry(var, fb, series):
            if not fb.outliers:
                return None, []
            rows = [
                {"row": table_row(series, i), "label": series.labels[i], "value": v}
                for i, v in fb.outliers
            ]
            anchors = [AnchorRef.data_point(r["row"], var) for r in rows]
            return {"outliers": rows, "count": len(rows)}, anchors

        def trend_entry(var, fb, series):
            if not fb.intervals:
                return None, []
            if fb.monotonic is not None:
                condition = "monotonic" if fb.monotonic is not F.Monotonicity.CONSTANT else "constant"
            elif len(fb.intervals) > config.interval_threshold:
                condition = "significant"
            else:
                condition = "intervals"
            entry = {
                "condition": condition,
                "monotonic": fb.monotonic.value if fb.monotonic else None,
                "first_value": series.y[0],
                "last_value": series.y[-1],
                "first_label": series.labels[0],
                "last_label": series.labels[-1],
                "interval_count": len(fb.intervals),
                "intervals": [_interval_dict(iv, series.labels) for iv in fb.intervals],
                "significant": [_interval_dict(iv, series.labels) for iv in fb.significant],
            }
            return entry, [AnchorRef.whole_column(var)]

        def correlation_entry(var, fb, series):
            if fb.correlation is None:
                return None, []
            independent = meta.axis_labels.get(AxisRole.INDEPENDENT) or bundle.table.columns[0].name
            return (
                {
                    "r": fb.correlation,
                    "strength": _correlation_strength(fb.correlation),
                    "direction": "positive" if fb.correlation >= 0 else "negative",
                    "independent": independent,
                },
                [AnchorRef.whole_column(var)],
            )

        def pie_entry(var, fb, series):
            if fb.pie_shares is None:
                return None, []
            shares = [
                {"label": series.labels[i], "value": series.y[i], "share": share}
                for i, share in enumerate(fb.pie_shares)
            ]
            largest = max(range(len(shares)), key=lambda i: shares[i]["share"])
            smallest = min(range(len(shares)), key=lambda i: shares[i]["share"])
            anchors = [
                AnchorRef.data_point(table_row(series, largest), var),
                AnchorRef.data_point(table_row(series, smallest), var),
            ]
            return (
                {"shares": shares, "count": len(shares), "largest": shares[largest], "smallest": shares[smallest]},
                anchors,
            )

        fact_specs = [
            ("fact.extrema", "Highest and lowest values", extrema_entry),
            ("fact.mean", "Average", scalar_entry("mean")),
            ("fact.stddev", "Standard deviation", scalar_entry("stddev")),
            ("fact.median", "Median", scalar_entry("median")),
            ("fact.outliers", "Outliers", outliers_entry),
            ("fact.trend", "Trend", trend_entry),
            ("fact.correlation", "Correlation", correlation_entry),
            ("fact.pie", "Slice shares", pie_entry),
        ]
        for feature_id, label, build in fact_specs:
            try:
                payload, anchors = per_var(build)
            except Exception:
                log.warning("omitting %s", feature_id, exc_info=True)
                continue
            if not payload:
                continue
            add(
                feature_id,
                label,
                fact,
                {"per_variable": payload},
                anchors,
                requires_variable=multivariate,
            )

        if multivariate and len(usable) >= 2:
            try:
                pairs = {}
                for i, a in enumerate(usable):
                    for b in usable[i + 1:]:
                        pairs[f"{a}|{b}"] = compare_groups(bundle, a, b)
                add(
                    "fact.comparison",
                    "Comparison",
                    fact,
                    {"variables": list(usable), "pairs": pairs},
                    [AnchorRef.whole_column(v) for v in usable],
                    requires_variable=True,
                )
            except Exception:
                log.warning("omitting fact.comparison", exc_info=True)

    # --- contextual knowledge slot
    add(
        CONTEXT_FEATURE_ID,
        "Contextual knowledge",
        FeatureCategory.CONTEXT,
        {},
        [AnchorRef.whole_chart()],
    )

    return FeatureCatalog(
        chart_id=meta.id,
        features=tuple(features),
        variables=tuple(usable) if multivariate else (),
    )
