"""Template-backed sentence rendering and description assembly.

Templates live in key=value .properties files; a key may carry condition
variants (``fact.trend.increasing``) resolved at render time.  Numbers are
formatted to at most two decimals, half away from zero, with a proper
minus sign.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, localcontext
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from .errors import (
    InvalidPermutationError,
    MalformedDocumentError,
    MissingVariableChoiceError,
    NonFiniteError,
    UnboundPlaceholderError,
    UnknownFeatureEditError,
    UnknownVariableError,
)
from .features import CONTEXT_FEATURE_ID, FeatureCatalog
from .model import DescriptionSegment, Feature, FeatureCategory, SelectionState

MINUS_SIGN = "−"

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class FormatConfig:
    max_decimals: int = 2


def format_number(value: Union[int, float], config: Optional[FormatConfig] = None) -> str:
    """Render a number with at most ``max_decimals`` decimals.

    Ties round away from zero, trailing zeros are stripped, integral
    results carry no decimal point, and negatives use U+2212.
    """
    config = config or FormatConfig()
    as_float = float(value)
    if not math.isfinite(as_float):
        raise NonFiniteError(f"cannot format {value!r}")
    with localcontext() as ctx:
        ctx.prec = 60
        quantum = Decimal(1).scaleb(-config.max_decimals)
        rounded = Decimal(repr(as_float)).quantize(quantum, rounding=ROUND_HALF_UP)
        if rounded == 0:
            return "0"
        text = format(rounded.normalize(), "f")
    if text.startswith("-"):
        text = MINUS_SIGN + text[1:]
    return text


def _format_percent(fraction: float, config: FormatConfig) -> str:
    return format_number(fraction * 100.0, config) + "%"


def join_natural(items: Sequence[str]) -> str:
    items = list(items)
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


@dataclass(frozen=True)
class TemplateCatalog:
    entries: Mapping[str, str]

    def resolve(self, key: str, condition: Optional[str] = None) -> str:
        if condition is not None:
            variant = f"{key}.{condition}"
            if variant in self.entries:
                return self.entries[variant]
        if key in self.entries:
            return self.entries[key]
        raise KeyError(key if condition is None else f"{key}.{condition}")


def parse_templates(text: str) -> TemplateCatalog:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MalformedDocumentError(f"line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        entries[key.strip()] = value
    return TemplateCatalog(entries=entries)


def load_templates(path: Optional[Union[str, Path]] = None) -> TemplateCatalog:
    if path is not None:
        return parse_templates(Path(path).read_text(encoding="utf-8"))
    source = resources.files("chartscribe").joinpath("assets/templates/en/default.properties")
    return parse_templates(source.read_text(encoding="utf-8"))


def fill(template: str, params: Mapping[str, str]) -> str:
    def replace(match: re.Match) -> str:
        name = match.group(1)
        if name not in params:
            raise UnboundPlaceholderError(name)
        return params[name]

    return _PLACEHOLDER.sub(replace, template)


def _stringify(params: Mapping[str, object], config: FormatConfig) -> dict[str, str]:
    out: dict[str, str] = {}
    for key, value in params.items():
        if isinstance(value, bool) or value is None:
            out[key] = str(value)
        elif isinstance(value, (int, float)):
            out[key] = format_number(value, config)
        else:
            out[key] = str(value)
    return out


def _lower_first(text: str) -> str:
    return text[0].lower() + text[1:] if text else text


def _interval_clause(interval: dict, templates: TemplateCatalog, config: FormatConfig) -> str:
    template = templates.resolve(f"fact.trend.interval.{interval['direction']}")
    return fill(template, _stringify(interval, config))


def _general_text(feature: Feature, templates: TemplateCatalog, config: FormatConfig) -> str:
    payload = feature.payload
    fid = feature.feature_id
    condition = None
    params: dict[str, object]
    if fid == "general.type":
        display = payload["display"]
        article = "an" if display[:1].lower() in "aeiou" else "a"
        params = {"chart_type": display, "article": article}
    elif fid == "general.title":
        params = {"title": payload["title"]}
    elif fid == "general.subtitle":
        params = {"subtitle": payload["subtitle"]}
    elif fid == "general.footnote":
        params = {"footnote": payload["footnote"]}
    elif fid == "general.axes":
        params = {"independent": payload["independent"], "dependent": payload["dependent"]}
    elif fid == "general.colors":
        if payload.get("mapping"):
            condition = "mapped"
            parts = [f"{var} in {entry['name']}" for var, entry in payload["mapping"].items()]
            params = {"mapping_list": join_natural(parts)}
        else:
            params = {"color_list": join_natural([c["name"] for c in payload["colors"]])}
    elif fid == "general.sorting":
        detected = payload["detected"]
        if payload["mismatch"]:
            condition = "mismatch"
        elif detected is None:
            condition = "none"
        elif detected == "constant":
            condition = "constant"
        params = {"detected": detected, "declared": payload["declared"]}
    elif fid == "general.dropped":
        if payload["count"] == 1:
            condition = "one"
        params = {"count": payload["count"]}
    else:
        raise KeyError(fid)
    return fill(templates.resolve(fid, condition), _stringify(params, config))


def _fact_entry_text(
    fid: str, entry: dict, templates: TemplateCatalog, config: FormatConfig
) -> str:
    condition = None
    params: dict[str, object]
    if fid == "fact.extrema":
        params = {
            "max_value": entry["max_value"],
            "max_label": entry["max_label"],
            "min_value": entry["min_value"],
            "min_label": entry["min_label"],
        }
    elif fid in ("fact.mean", "fact.stddev", "fact.median"):
        key = fid.split(".", 1)[1]
        params = {key: entry[key]}
    elif fid == "fact.outliers":
        points = [
            f"{format_number(o['value'], config)} ({o['label']})" for o in entry["outliers"]
        ]
        condition = "one" if entry["count"] == 1 else "many"
        params = {"count": entry["count"], "outlier_list": join_natural(points)}
    elif fid == "fact.trend":
        if entry["condition"] == "monotonic":
            condition = entry["monotonic"]
        else:
            condition = entry["condition"]
        source = entry["significant"] if condition == "significant" else entry["intervals"]
        clauses = join_natural([_interval_clause(iv, templates, config) for iv in source])
        params = {
            "first_value": entry["first_value"],
            "last_value": entry["last_value"],
            "first_label": entry["first_label"],
            "last_label": entry["last_label"],
            "interval_count": entry["interval_count"],
            "clauses": clauses,
        }
    elif fid == "fact.correlation":
        params = {
            "r": entry["r"],
            "strength": entry["strength"],
            "direction": entry["direction"],
            "independent": entry["independent"],
        }
    elif fid == "fact.pie":
        params = {
            "largest_label": entry["largest"]["label"],
            "largest_share": _format_percent(entry["largest"]["share"], config),
            "smallest_label": entry["smallest"]["label"],
            "smallest_share": _format_percent(entry["smallest"]["share"], config),
        }
    else:
        raise KeyError(fid)
    return fill(templates.resolve(fid, condition), _stringify(params, config))


def _comparison_text(
    feature: Feature,
    variables: Sequence[str],
    templates: TemplateCatalog,
    config: FormatConfig,
) -> str:
    known = list(feature.payload["variables"])
    chosen = list(variables)
    if not chosen and len(known) == 2:
        chosen = known
    if len(chosen) != 2:
        raise MissingVariableChoiceError(feature.feature_id)
    for var in chosen:
        if var not in known:
            raise UnknownVariableError(var)
    pairs = feature.payload["pairs"]
    key = f"{chosen[0]}|{chosen[1]}"
    if key not in pairs:
        key = f"{chosen[1]}|{chosen[0]}"
    pair = pairs[key]
    params = {
        "var_a": pair["var_a"],
        "var_b": pair["var_b"],
        "a_count": pair["a_larger_count"],
        "b_count": pair["b_larger_count"],
        "rows": pair["rows_compared"],
        "mean_a": pair["mean_a"],
        "mean_b": pair["mean_b"],
        "gap": pair["max_gap"],
        "gap_label": pair["max_gap_label"],
    }
    return fill(templates.resolve("fact.comparison"), _stringify(params, config))


def render_feature(
    feature: Feature,
    templates: Optional[TemplateCatalog] = None,
    *,
    variables: Sequence[str] = (),
    context_text: Optional[str] = None,
    config: Optional[FormatConfig] = None,
) -> str:
    """Render one feature to a sentence.

    ``variables`` drives multivariate features: one choice yields that
    variable's sentence, two yield both sentences back to back.
    """
    templates = templates or load_templates()
    config = config or FormatConfig()

    if feature.category is FeatureCategory.CONTEXT:
        text = (context_text or "").strip()
        return fill(templates.resolve(CONTEXT_FEATURE_ID), {"text": text})
    if feature.category is FeatureCategory.GENERAL_INFO:
        return _general_text(feature, templates, config)

    if feature.feature_id == "fact.comparison":
        return _comparison_text(feature, variables, templates, config)

    per_variable = feature.payload["per_variable"]
    if feature.requires_variable:
        if not variables:
            raise MissingVariableChoiceError(feature.feature_id)
        for var in variables:
            if var not in per_variable:
                raise UnknownVariableError(var)
        chosen = list(variables)
        wrap = True
    else:
        chosen = list(per_variable)
        wrap = len(chosen) > 1
    sentences = []
    for var in chosen:
        base = _fact_entry_text(feature.feature_id, per_variable[var], templates, config)
        if wrap:
            base = fill(
                templates.resolve("feature.var"),
                {"variable": var, "sentence": _lower_first(base)},
            )
        sentences.append(base)
    return " ".join(sentences)


def update_for_variables(
    feature: Feature,
    variables: Sequence[str],
    templates: Optional[TemplateCatalog] = None,
    config: Optional[FormatConfig] = None,
) -> str:
    """Re-render a variable-dependent feature for a new dropdown choice."""
    return render_feature(feature, templates, variables=variables, config=config)


@dataclass(frozen=True)
class Description:
    segments: tuple[DescriptionSegment, ...]
    text: str


def compose_description(
    catalog: FeatureCatalog,
    selection: SelectionState,
    templates: Optional[TemplateCatalog] = None,
    config: Optional[FormatConfig] = None,
) -> Description:
    """Assemble selected features, in the selected order, into a description.

    Manual edits replace rendered text but keep the feature's anchors.
    The context segment is skipped when its text is empty.
    """
    templates = templates or load_templates()
    config = config or FormatConfig()

    ids = list(selection.selected_feature_ids)
    if len(set(ids)) != len(ids):
        raise InvalidPermutationError("duplicate feature ids in selection")
    known = set(catalog.feature_ids())
    for fid in ids:
        if fid not in known:
            raise InvalidPermutationError(f"unknown feature id: {fid}")
    for fid in selection.manual_edits:
        if fid not in ids:
            raise UnknownFeatureEditError(fid)

    segments: list[DescriptionSegment] = []
    for fid in ids:
        feature = catalog.get(fid)
        edited = fid in selection.manual_edits
        if edited:
            text = selection.manual_edits[fid]
        else:
            text = render_feature(
                feature,
                templates,
                variables=tuple(selection.variable_choices.get(fid, ())),
                context_text=selection.context_text,
                config=config,
            )
        if not text.strip():
            continue
        segments.append(
            DescriptionSegment(
                feature_id=fid,
                text=text,
                anchors=feature.anchors,
                order_index=len(segments),
                edited=edited,
            )
        )
    return Description(
        segments=tuple(segments),
        text=" ".join(segment.text for segment in segments),
    )


def full_selection(catalog: FeatureCatalog, context_text: str = "") -> SelectionState:
    """Select every available feature in catalog order.

    Variable-dependent facts get the first applicable variable; the
    comparison gets the first two.  The context slot is included only
    when text was supplied.
    """
    ids: list[str] = []
    choices: dict[str, list[str]] = {}
    for feature in catalog.features:
        if feature.category is FeatureCategory.CONTEXT and not context_text.strip():
            continue
        ids.append(feature.feature_id)
        if feature.requires_variable:
            if feature.feature_id == "fact.comparison":
                choices[feature.feature_id] = list(feature.payload["variables"][:2])
            else:
                choices[feature.feature_id] = list(feature.payload["per_variable"])[:1]
    return SelectionState(
        selected_feature_ids=tuple(ids),
        variable_choices=choices,
        context_text=context_text,
        manual_edits={},
    )
