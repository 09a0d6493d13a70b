"""HTTP facade over the engine plus a directory-backed chart store.

Endpoints serve chart listings, feature catalogs, composed descriptions,
annotated SVGs, and remote imports.  The store index is an immutable
snapshot swapped atomically, so reads never block; writes (import,
rescan) serialize on a lock.
"""

from __future__ import annotations

import logging
import os
import threading
import xml.etree.ElementTree as ET
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

import httpx
from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import errors as E
from .facts import FactsConfig
from .features import FeatureCatalog, applicable_variables, detect_features
from .ingestion import (
    ChartBundle,
    RemoteConfig,
    fetch_chart,
    format_cell,
    load_bundle,
    save_bundle,
    serialize_metadata,
)
from .model import AnchorRef, ChartType, SelectionState, chart_type_from_text
from .textgen import Description, compose_description, full_selection, load_templates

log = logging.getLogger(__name__)

DEFAULT_PAGE_SIZE = 20
MAX_PAGE_SIZE = 100

SVG_NS = "http://www.w3.org/2000/svg"


class ChartStore:
    """Index of bundle directories under one root.

    Readers use whatever snapshot is current; rescan/save build a fresh
    dict and swap it in, so a half-finished scan is never observable.
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self._write_lock = threading.Lock()
        self._index: dict[str, ChartBundle] = {}

    def __len__(self) -> int:
        return len(self._index)

    def rescan(self) -> int:
        with self._write_lock:
            index: dict[str, ChartBundle] = {}
            if self.root.is_dir():
                for entry in sorted(self.root.iterdir()):
                    if not (entry / "metadata.json").is_file():
                        continue
                    try:
                        bundle = load_bundle(entry)
                    except Exception:
                        log.warning("skipping unreadable bundle at %s", entry, exc_info=True)
                        continue
                    index[bundle.metadata.id] = bundle
            self._index = index
        return len(self._index)

    def get(self, chart_id: str) -> ChartBundle:
        try:
            return self._index[chart_id]
        except KeyError:
            raise E.ChartNotFoundError(chart_id) from None

    def list(self) -> list[ChartBundle]:
        by_id = sorted(self._index.values(), key=lambda b: b.metadata.id)
        return sorted(by_id, key=lambda b: b.metadata.created_at, reverse=True)

    def save(self, bundle: ChartBundle) -> Path:
        with self._write_lock:
            path = save_bundle(bundle, self.root / bundle.metadata.id)
            index = dict(self._index)
            index[bundle.metadata.id] = bundle
            self._index = index
        return path


# --- JSON shapes ---------------------------------------------------------------

def _json_cell(cell):
    if isinstance(cell, datetime):
        return format_cell(cell)
    return cell


def _instant_json(value: datetime) -> str:
    return value.isoformat() + "Z"


def anchor_to_json(anchor: AnchorRef) -> dict:
    return {
        "target": anchor.target.value,
        "row": anchor.row,
        "column": anchor.column,
        "axis": anchor.axis.value if anchor.axis is not None else None,
    }


def chart_summary(bundle: ChartBundle) -> dict:
    meta = bundle.metadata
    return {
        "id": meta.id,
        "title": meta.title,
        "type": meta.chart_type.value,
        "created_at": _instant_json(meta.created_at),
        "rows": len(bundle.table.rows),
        "has_svg": bundle.svg_text is not None,
    }


def chart_detail(bundle: ChartBundle) -> dict:
    return {
        "metadata": serialize_metadata(bundle.metadata),
        "columns": [
            {"name": col.name, "kind": col.kind.value} for col in bundle.table.columns
        ],
        "rows": [[_json_cell(cell) for cell in row] for row in bundle.table.rows],
        "has_svg": bundle.svg_text is not None,
        "extracted_colors": list(bundle.extracted_colors),
    }


def catalog_to_json(catalog: FeatureCatalog) -> dict:
    return {
        "chart_id": catalog.chart_id,
        "variables": list(catalog.variables),
        "features": [
            {
                "feature_id": f.feature_id,
                "category": f.category.value,
                "color": f.display_color,
                "label": f.label,
                "requires_variable": f.requires_variable,
                "payload": f.payload,
                "anchors": [anchor_to_json(a) for a in f.anchors],
            }
            for f in catalog.features
        ],
    }


def description_to_json(description: Description) -> dict:
    return {
        "text": description.text,
        "segments": [
            {
                "feature_id": s.feature_id,
                "text": s.text,
                "order_index": s.order_index,
                "edited": s.edited,
                "anchors": [anchor_to_json(a) for a in s.anchors],
            }
            for s in description.segments
        ],
    }


def selection_from_body(body: Optional[dict], catalog: FeatureCatalog) -> SelectionState:
    """Build a SelectionState from a request body.

    A missing selected_feature_ids means "everything": the client gets
    the same default the CLI uses.  An explicit empty list stays empty.
    """
    body = body or {}
    context_text = body.get("context_text") or ""
    try:
        ids = body.get("selected_feature_ids")
        choices = {
            str(fid): [str(v) for v in vals]
            for fid, vals in (body.get("variable_choices") or {}).items()
        }
        edits = {str(fid): str(text) for fid, text in (body.get("manual_edits") or {}).items()}
        if ids is None:
            base = full_selection(catalog, context_text)
            merged = dict(base.variable_choices)
            merged.update(choices)
            return SelectionState(base.selected_feature_ids, merged, context_text, edits)
        return SelectionState(tuple(str(fid) for fid in ids), choices, context_text, edits)
    except (TypeError, AttributeError) as exc:
        raise E.SelectionValidationError(f"malformed selection: {exc}") from exc


# --- SVG annotation ------------------------------------------------------------

def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _mark_tags(chart_type: ChartType) -> frozenset:
    if chart_type in (ChartType.LINE, ChartType.AREA):
        return frozenset({"circle"})
    if chart_type is ChartType.PIE:
        return frozenset({"path"})
    return frozenset({"rect"})


def _is_mark(element: ET.Element, tags: frozenset) -> bool:
    if _local_name(element.tag) not in tags:
        return False
    fill = (element.get("fill") or "").strip().lower()
    return fill != "none"


def annotate_svg(bundle: ChartBundle) -> str:
    """Inject data-row/data-column hooks for client-side highlighting.

    Marks are matched to table rows in document order; <g class="series">
    groups, when their count matches the dependent variables, map marks
    per variable.  The title text element gets data-anchor="title".
    """
    if bundle.svg_text is None:
        raise E.ChartNotFoundError(f"{bundle.metadata.id}/svg")
    ET.register_namespace("", SVG_NS)
    try:
        root = ET.fromstring(bundle.svg_text)
    except ET.ParseError as exc:
        raise E.MalformedMarkupError(str(exc)) from exc

    tags = _mark_tags(bundle.metadata.chart_type)
    variables = applicable_variables(bundle)

    title = bundle.metadata.title
    if title:
        for element in root.iter():
            if _local_name(element.tag) == "text" and (element.text or "").strip() == title:
                element.set("data-anchor", "title")
                break

    groups = [
        g
        for g in root.iter()
        if _local_name(g.tag) == "g" and "series" in (g.get("class") or "")
    ]
    if groups and len(groups) == len(variables):
        for variable, group in zip(variables, groups):
            group.set("data-column", variable)
            row = 0
            for element in group.iter():
                if _is_mark(element, tags):
                    element.set("data-row", str(row))
                    element.set("data-column", variable)
                    row += 1
    else:
        variable = variables[0] if variables else None
        row = 0
        for element in root.iter():
            if _is_mark(element, tags):
                element.set("data-row", str(row))
                if variable is not None:
                    element.set("data-column", variable)
                row += 1
    return ET.tostring(root, encoding="unicode")


# --- application ---------------------------------------------------------------

_ERROR_STATUS: list[tuple[type, int, str]] = [
    (E.ChartNotFoundError, 404, "not_found"),
    (E.RemoteNotFoundError, 404, "remote_not_found"),
    (E.AuthFailedError, 401, "auth_failed"),
    (E.RemoteTimeoutError, 504, "remote_timeout"),
    (E.UpstreamError, 502, "upstream_error"),
    (E.InvalidPageError, 422, "invalid_page"),
    (E.UnknownChartTypeError, 422, "unknown_chart_type"),
    (E.InvalidPermutationError, 422, "invalid_selection"),
    (E.UnknownFeatureEditError, 422, "invalid_selection"),
    (E.MissingVariableChoiceError, 422, "invalid_selection"),
    (E.UnknownVariableError, 422, "invalid_selection"),
    (E.SelectionValidationError, 422, "invalid_selection"),
    (E.MissingFieldError, 422, "malformed_request"),
    (E.ChartScribeError, 500, "internal_error"),
]


def _remote_from_env() -> Optional[RemoteConfig]:
    base = os.environ.get("CHARTSCRIBE_REMOTE_BASE")
    return RemoteConfig(base_url=base) if base else None


def create_app(
    store_dir: Optional[Union[str, Path]] = None,
    remote: Optional[RemoteConfig] = None,
    http_client: Optional[httpx.Client] = None,
    facts_config: Optional[FactsConfig] = None,
) -> FastAPI:
    """Build the service; remote config and HTTP client are injectable."""
    store = ChartStore(store_dir or os.environ.get("CHARTSCRIBE_STORE_DIR") or "charts")
    store.rescan()
    templates = load_templates()
    config = facts_config or FactsConfig()

    app = FastAPI(title="chartscribe", docs_url=None, redoc_url=None)
    app.state.store = store
    # The UI may be served from a different origin than the API.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def error_response(status: int, kind: str, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={"error": {"type": kind, "message": str(exc)}},
        )

    for exc_type, status, kind in _ERROR_STATUS:
        def handler(request: Request, exc: Exception, status=status, kind=kind):
            return error_response(status, kind, exc)

        app.add_exception_handler(exc_type, handler)

    def resolve_remote() -> RemoteConfig:
        config = remote or _remote_from_env()
        if config is None:
            raise E.UpstreamError(0, "no remote API configured")
        return config

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "charts": len(store)}

    @app.get("/api/charts")
    def list_charts(page: int = 1, page_size: int = DEFAULT_PAGE_SIZE, type: Optional[str] = None):
        if page < 1:
            raise E.InvalidPageError(f"page must be >= 1, got {page}")
        if not 1 <= page_size <= MAX_PAGE_SIZE:
            raise E.InvalidPageError(f"page_size must be in 1..{MAX_PAGE_SIZE}, got {page_size}")
        charts = store.list()
        if type is not None:
            wanted = chart_type_from_text(type)
            charts = [b for b in charts if b.metadata.chart_type is wanted]
        total = len(charts)
        start = (page - 1) * page_size
        return {
            "charts": [chart_summary(b) for b in charts[start : start + page_size]],
            "page": page,
            "page_size": page_size,
            "total": total,
        }

    @app.get("/api/charts/{chart_id}")
    def get_chart(chart_id: str):
        return chart_detail(store.get(chart_id))

    @app.get("/api/charts/{chart_id}/features")
    def get_features(chart_id: str):
        return catalog_to_json(detect_features(store.get(chart_id), config))

    @app.post("/api/charts/{chart_id}/description")
    def post_description(chart_id: str, body: Optional[dict] = Body(default=None)):
        bundle = store.get(chart_id)
        catalog = detect_features(bundle, config)
        selection = selection_from_body(body, catalog)
        description = compose_description(catalog, selection, templates)
        return description_to_json(description)

    @app.get("/api/charts/{chart_id}/svg")
    def get_svg(chart_id: str):
        bundle = store.get(chart_id)
        return Response(content=annotate_svg(bundle), media_type="image/svg+xml")

    @app.post("/api/charts/import", status_code=201)
    def import_chart(body: Optional[dict] = Body(default=None)):
        remote_id = (body or {}).get("remote_id")
        if not isinstance(remote_id, str) or not remote_id:
            raise E.MissingFieldError("remote_id")
        try:
            bundle = fetch_chart(remote_id, resolve_remote(), client=http_client)
        except E.RemoteError:
            raise
        except E.ChartScribeError as exc:
            raise E.UpstreamError(0, f"remote bundle invalid: {exc}") from exc
        store.save(bundle)
        return {
            "id": bundle.metadata.id,
            "title": bundle.metadata.title,
            "type": bundle.metadata.chart_type.value,
            "has_svg": bundle.svg_text is not None,
        }

    @app.post("/api/rescan")
    def rescan():
        return {"charts": store.rescan()}

    return app
