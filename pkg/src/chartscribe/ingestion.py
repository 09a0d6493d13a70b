"""Bundle parsing: metadata JSON, CSV tables, SVG colors, remote fetch.

A bundle directory holds ``metadata.json``, ``data.csv`` (header row,
RFC 4180 quoting), and an optional ``chart.svg``.  The same three
documents can be fetched from a Datawrapper-style remote API; the field
mapping is documented in docs/bundle_format.md.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Optional

import httpx

from .colors import css3_palette
from .errors import (
    AuthFailedError,
    BundleFileMissingError,
    DuplicateColumnError,
    EmptyInputError,
    MalformedDocumentError,
    MalformedMarkupError,
    MissingFieldError,
    RaggedRowError,
    RemoteNotFoundError,
    RemoteTimeoutError,
    UnknownVariableError,
    UpstreamError,
)
from .model import (
    AxisRole,
    Cell,
    ChartMetadata,
    ColumnKind,
    ColumnSpec,
    DataTable,
    Series,
    SortOrder,
    chart_type_from_text,
    validate_bundle,
)

TOKEN_ENV_VAR = "CHARTSCRIBE_API_TOKEN"

_EPOCH = datetime(1970, 1, 1)

# Date patterns accepted by column-kind inference, checked in this order.
_TEMPORAL_PATTERNS = (
    re.compile(r"^\d{4}$"),
    re.compile(r"^\d{4}-\d{2}$"),
    re.compile(r"^\d{4}-\d{2}-\d{2}$"),
    re.compile(r"^\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}(:\d{2})?(Z|[+-]\d{2}:\d{2})?$"),
)


@dataclass(frozen=True)
class ChartBundle:
    metadata: ChartMetadata
    table: DataTable
    svg_text: Optional[str] = None
    extracted_colors: tuple[str, ...] = ()
    # Original documents as loaded or fetched; save_bundle writes these
    # verbatim so an imported bundle matches its source byte for byte.
    raw_metadata: Optional[str] = None
    raw_csv: Optional[str] = None


@dataclass(frozen=True)
class RemoteConfig:
    base_url: str
    token: Optional[str] = None
    timeout: float = 10.0

    def resolved_token(self) -> Optional[str]:
        return self.token if self.token is not None else os.environ.get(TOKEN_ENV_VAR)


# --- metadata ----------------------------------------------------------------

def _parse_instant(text: str) -> datetime:
    """ISO-8601 instant to a naive UTC datetime."""
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise MalformedDocumentError(f"bad timestamp {text!r}: {exc}") from None
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc).replace(tzinfo=None)
    return dt


_SORT_ALIASES = {
    "asc": SortOrder.ASCENDING,
    "ascending": SortOrder.ASCENDING,
    "desc": SortOrder.DESCENDING,
    "descending": SortOrder.DESCENDING,
}


def parse_metadata(doc: str) -> ChartMetadata:
    """Parse the metadata JSON document; unrecognized fields are ignored."""
    try:
        raw = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(str(exc)) from None
    if not isinstance(raw, dict):
        raise MalformedDocumentError("metadata document must be a JSON object")

    chart_id = raw.get("id")
    if not isinstance(chart_id, str) or not chart_id:
        raise MissingFieldError("id")
    type_text = raw.get("type")
    if not isinstance(type_text, str) or not type_text:
        raise MissingFieldError("type")

    axis_labels: dict[AxisRole, Optional[str]] = {role: None for role in AxisRole}
    axes = raw.get("axes")
    if isinstance(axes, dict):
        for role in AxisRole:
            value = axes.get(role.value)
            if value is not None and not isinstance(value, str):
                raise MalformedDocumentError(f"axis label for {role.value!r} must be text")
            axis_labels[role] = value

    declared_sorted = None
    sorted_text = raw.get("sorted")
    if sorted_text is not None:
        if not isinstance(sorted_text, str) or sorted_text.lower() not in _SORT_ALIASES:
            raise MalformedDocumentError(f"bad sorted value: {sorted_text!r}")
        declared_sorted = _SORT_ALIASES[sorted_text.lower()]

    created_text = raw.get("created_at")
    created_at = _parse_instant(created_text) if created_text is not None else _EPOCH

    footnote = raw.get("footnote", raw.get("notes"))
    source_note = raw.get("source_note", raw.get("source"))

    return ChartMetadata(
        id=chart_id,
        title=raw.get("title") or "",
        chart_type=chart_type_from_text(type_text),
        created_at=created_at,
        subtitle=raw.get("subtitle"),
        footnote=footnote,
        axis_labels=axis_labels,
        declared_sorted=declared_sorted,
        source_note=source_note,
    )


def serialize_metadata(meta: ChartMetadata) -> dict:
    """Canonical JSON form; parse_metadata(json.dumps(...)) round-trips."""
    return {
        "id": meta.id,
        "title": meta.title,
        "subtitle": meta.subtitle,
        "footnote": meta.footnote,
        "type": meta.chart_type.value,
        "axes": {role.value: meta.axis_labels.get(role) for role in AxisRole},
        "sorted": meta.declared_sorted.value if meta.declared_sorted else None,
        "created_at": meta.created_at.isoformat() + "Z",
        "source_note": meta.source_note,
    }


# --- tabular data -------------------------------------------------------------

def _is_missing(cell: str) -> bool:
    return cell.strip() == ""


def _try_float(cell: str) -> Optional[float]:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def _try_temporal(cell: str) -> Optional[datetime]:
    text = cell.strip()
    if not any(p.match(text) for p in _TEMPORAL_PATTERNS):
        return None
    try:
        if re.match(r"^\d{4}$", text):
            return datetime(int(text), 1, 1)
        if re.match(r"^\d{4}-\d{2}$", text):
            return datetime(int(text[:4]), int(text[5:7]), 1)
        return _parse_instant(text.replace(" ", "T"))
    except (ValueError, MalformedDocumentError):
        return None


def _infer_kind(cells: list[str]) -> ColumnKind:
    present = [c for c in cells if not _is_missing(c)]
    if all(_try_float(c) is not None for c in present):
        return ColumnKind.NUMERIC
    if all(_try_temporal(c) is not None for c in present):
        return ColumnKind.TEMPORAL
    return ColumnKind.CATEGORICAL


def _convert(cell: str, kind: ColumnKind) -> Cell:
    if kind is ColumnKind.NUMERIC:
        return None if _is_missing(cell) else _try_float(cell)
    if kind is ColumnKind.TEMPORAL:
        return None if _is_missing(cell) else _try_temporal(cell)
    return cell


def parse_data_table(csv_text: str) -> DataTable:
    """Parse CSV with a header row; column kinds inferred per column.

    Inference order: numeric when every non-missing cell is a finite
    number, else temporal when every non-missing cell matches an ISO-8601
    date or year-only pattern, else categorical.
    """
    if not csv_text.strip():
        raise EmptyInputError("no CSV content")
    records = list(csv.reader(io.StringIO(csv_text)))
    records = [r for r in records if r]  # drop fully empty records
    if not records:
        raise EmptyInputError("no CSV records")
    header = records[0]
    seen: set[str] = set()
    for name in header:
        if name in seen:
            raise DuplicateColumnError(name)
        seen.add(name)
    raw_rows = records[1:]
    if not raw_rows:
        raise EmptyInputError("header row but no data rows")
    for i, row in enumerate(raw_rows):
        if len(row) != len(header):
            raise RaggedRowError(i, expected=len(header), got=len(row))

    kinds = [_infer_kind([row[j] for row in raw_rows]) for j in range(len(header))]
    columns = tuple(ColumnSpec(name, kind) for name, kind in zip(header, kinds))
    rows = tuple(
        tuple(_convert(row[j], kinds[j]) for j in range(len(header))) for row in raw_rows
    )
    return DataTable(columns=columns, rows=rows)


def format_cell(value: Cell) -> str:
    """Render a cell back to text so the table re-parses identically."""
    if value is None:
        return ""
    if isinstance(value, datetime):
        if value.time() == value.time().min:
            return value.date().isoformat()
        return value.isoformat() + "Z"
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e15:
            return str(int(value))
        return repr(value)
    return value


def serialize_data_table(table: DataTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.column_names())
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


# --- SVG color extraction ------------------------------------------------------

_HEX_COLOR_RE = re.compile(r"^#([0-9A-Fa-f]{3}|[0-9A-Fa-f]{4}|[0-9A-Fa-f]{6}|[0-9A-Fa-f]{8})$")
_RGB_FUNC_RE = re.compile(
    r"^rgba?\(\s*(\d{1,3})\s*,\s*(\d{1,3})\s*,\s*(\d{1,3})\s*(?:,\s*([0-9.]+)\s*)?\)$"
)


@lru_cache(maxsize=1)
def _named_color_hexes() -> dict[str, str]:
    return {entry.name: entry.hex for entry in css3_palette()}


def _normalize_color(value: str) -> Optional[str]:
    """Uppercase #RRGGBB for a paint value, None when not a visible color."""
    text = value.strip()
    lowered = text.lower()
    if lowered in ("", "none", "transparent", "currentcolor", "inherit") or lowered.startswith("url("):
        return None
    m = _HEX_COLOR_RE.match(text)
    if m:
        digits = m.group(1)
        if len(digits) in (3, 4):
            digits = "".join(ch * 2 for ch in digits)
        if len(digits) == 8:
            if digits[6:8] == "00":
                return None  # fully transparent
            digits = digits[:6]
        return "#" + digits.upper()
    m = _RGB_FUNC_RE.match(lowered)
    if m:
        r, g, b = (min(int(m.group(i)), 255) for i in (1, 2, 3))
        if m.group(4) is not None and float(m.group(4)) == 0.0:
            return None
        return f"#{r:02X}{g:02X}{b:02X}"
    return _named_color_hexes().get(lowered)


def _element_paints(element: ET.Element):
    for attr in ("fill", "stroke"):
        value = element.get(attr)
        if value is not None:
            yield value
    style = element.get("style")
    if style:
        for decl in style.split(";"):
            if ":" not in decl:
                continue
            prop, value = decl.split(":", 1)
            if prop.strip().lower() in ("fill", "stroke"):
                yield value


def extract_svg_colors(svg_text: str) -> list[str]:
    """De-duplicated document-order fill/stroke colors, as "#RRGGBB".

    Covers presentation attributes and inline style declarations only;
    CSS class resolution is out of scope.
    """
    try:
        root = ET.fromstring(svg_text)
    except ET.ParseError as exc:
        raise MalformedMarkupError(str(exc)) from None
    out: list[str] = []
    seen: set[str] = set()
    for element in root.iter():
        for paint in _element_paints(element):
            color = _normalize_color(paint)
            if color is not None and color not in seen:
                seen.add(color)
                out.append(color)
    return out


# --- bundle assembly ------------------------------------------------------------

def _assemble(metadata_doc: str, csv_text: str, svg_text: Optional[str]) -> ChartBundle:
    bundle = ChartBundle(
        metadata=parse_metadata(metadata_doc),
        table=parse_data_table(csv_text),
        svg_text=svg_text,
        extracted_colors=tuple(extract_svg_colors(svg_text)) if svg_text is not None else (),
        raw_metadata=metadata_doc,
        raw_csv=csv_text,
    )
    return validate_bundle(bundle)


def load_bundle(path: str | Path) -> ChartBundle:
    """Load and validate a bundle directory from disk."""
    directory = Path(path)
    meta_path = directory / "metadata.json"
    data_path = directory / "data.csv"
    svg_path = directory / "chart.svg"
    if not meta_path.is_file():
        raise BundleFileMissingError("metadata.json")
    if not data_path.is_file():
        raise BundleFileMissingError("data.csv")
    svg_text = svg_path.read_text("utf-8") if svg_path.is_file() else None
    return _assemble(meta_path.read_text("utf-8"), data_path.read_text("utf-8"), svg_text)


def save_bundle(bundle: ChartBundle, directory: str | Path) -> Path:
    """Persist a bundle as a directory load_bundle can read back."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if bundle.raw_metadata is not None:
        meta_json = bundle.raw_metadata
    else:
        meta_json = json.dumps(serialize_metadata(bundle.metadata), indent=2) + "\n"
    (directory / "metadata.json").write_text(meta_json, "utf-8")
    csv_text = bundle.raw_csv
    if csv_text is None:
        csv_text = serialize_data_table(bundle.table)
    (directory / "data.csv").write_text(csv_text, "utf-8")
    if bundle.svg_text is not None:
        (directory / "chart.svg").write_text(bundle.svg_text, "utf-8")
    return directory


def fetch_chart(
    chart_id: str,
    config: RemoteConfig,
    client: Optional[httpx.Client] = None,
) -> ChartBundle:
    """Fetch metadata, data, and SVG export from a remote API.

    The HTTP client is injectable so tests can run against a stub
    transport.  A missing SVG export (404) yields a bundle without SVG;
    a missing metadata or data document is an error.
    """
    token = config.resolved_token()
    if not token:
        raise AuthFailedError(f"no API token; set {TOKEN_ENV_VAR} or pass one explicitly")
    headers = {"Authorization": f"Bearer {token}"}
    base = config.base_url.rstrip("/")

    own_client = client is None
    if own_client:
        client = httpx.Client(timeout=config.timeout)
    try:
        def get(path: str) -> httpx.Response:
            try:
                resp = client.get(base + path, headers=headers)
            except httpx.TimeoutException as exc:
                raise RemoteTimeoutError(str(exc)) from None
            except httpx.HTTPError as exc:
                raise UpstreamError(0, str(exc)) from None
            if resp.status_code in (401, 403):
                raise AuthFailedError(f"remote rejected token ({resp.status_code})")
            return resp

        meta_resp = get(f"/charts/{chart_id}")
        if meta_resp.status_code == 404:
            raise RemoteNotFoundError(chart_id)
        if meta_resp.status_code >= 400:
            raise UpstreamError(meta_resp.status_code)

        data_resp = get(f"/charts/{chart_id}/data")
        if data_resp.status_code == 404:
            raise RemoteNotFoundError(chart_id)
        if data_resp.status_code >= 400:
            raise UpstreamError(data_resp.status_code)

        svg_resp = get(f"/charts/{chart_id}/export/svg")
        svg_text: Optional[str] = None
        if svg_resp.status_code == 200:
            svg_text = svg_resp.text
        elif svg_resp.status_code != 404:
            raise UpstreamError(svg_resp.status_code)

        return _assemble(meta_resp.text, data_resp.text, svg_text)
    finally:
        if own_client:
            client.close()


# --- per-variable series ----------------------------------------------------------

def build_series(bundle: ChartBundle, variable: str) -> tuple[Series, int]:
    """Series for one dependent numeric column, plus the dropped-point count.

    Rows whose y value is missing are dropped with their x partner; rows
    whose numeric or temporal x value is missing are dropped too, since
    they cannot be placed on the axis.
    """
    table = bundle.table
    try:
        y_idx = table.column_index(variable)
    except KeyError:
        raise UnknownVariableError(variable) from None
    # The first column is the independent axis, never a dependent variable.
    if y_idx == 0 or table.columns[y_idx].kind is not ColumnKind.NUMERIC:
        raise UnknownVariableError(variable)

    x_col = table.columns[0]
    xs: list = []
    ys: list[float] = []
    labels: list[str] = []
    source_rows: list[int] = []
    dropped = 0
    for i, row in enumerate(table.rows):
        x_val = row[0]
        y_val = row[y_idx]
        if y_val is None or (x_col.kind is not ColumnKind.CATEGORICAL and x_val is None):
            dropped += 1
            continue
        if x_col.kind is ColumnKind.CATEGORICAL:
            xs.append(len(xs))
            labels.append(str(x_val))
        else:
            xs.append(x_val)
            labels.append(format_cell(x_val))
        ys.append(float(y_val))
        source_rows.append(i)
    series = Series(
        label=variable,
        x=tuple(xs),
        y=tuple(ys),
        x_kind=x_col.kind,
        labels=tuple(labels),
        source_rows=tuple(source_rows),
    )
    return series, dropped
