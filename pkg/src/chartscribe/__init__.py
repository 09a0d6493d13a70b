"""Chart-to-text description engine.

Ingests chart bundles (metadata, CSV data, optional SVG), computes
describable features, and renders template-based natural-language
descriptions with chart-element anchors for interactive authoring.
"""

from .colors import delta_e76, nearest_color_name, srgb_to_lab
from .facts import FactsConfig, compute_facts, iqr_outliers, is_monotonic, segment_trend
from .features import FeatureCatalog, applicable_variables, detect_features
from .ingestion import ChartBundle, RemoteConfig, fetch_chart, load_bundle, save_bundle
from .model import ChartMetadata, ChartType, DataTable, Feature, SelectionState
from .textgen import (
    Description,
    compose_description,
    format_number,
    full_selection,
    load_templates,
    render_feature,
)

__version__ = "0.1.0"

__all__ = [
    "ChartBundle",
    "ChartMetadata",
    "ChartType",
    "DataTable",
    "Description",
    "FactsConfig",
    "Feature",
    "FeatureCatalog",
    "RemoteConfig",
    "SelectionState",
    "applicable_variables",
    "compose_description",
    "compute_facts",
    "delta_e76",
    "detect_features",
    "fetch_chart",
    "format_number",
    "full_selection",
    "iqr_outliers",
    "is_monotonic",
    "load_bundle",
    "load_templates",
    "nearest_color_name",
    "render_feature",
    "save_bundle",
    "segment_trend",
    "srgb_to_lab",
    "__version__",
]
