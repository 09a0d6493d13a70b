"""Batch front door: describe bundles on disk, serve the API, import charts.

`describe` renders the full description (every feature, catalog order) so
its text output matches a service post_description call with the default
selection.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Optional

import click

from .errors import ChartScribeError
from .facts import DEFAULT_INTERVAL_THRESHOLD, DEFAULT_TOP_K, FactsConfig
from .features import detect_features
from .ingestion import RemoteConfig, fetch_chart, load_bundle, save_bundle
from .service import create_app, description_to_json
from .textgen import compose_description, full_selection, load_templates


@click.group()
def main():
    """Generate text descriptions of charts."""


def _describe_bundle(path: Path, config: FactsConfig, templates):
    bundle = load_bundle(path)
    catalog = detect_features(bundle, config)
    description = compose_description(catalog, full_selection(catalog), templates)
    return bundle, description


@main.command()
@click.argument("paths", nargs=-1, type=click.Path(path_type=Path))
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
    help="Plain sentences or segments with anchors as JSON.",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write one file per bundle instead of printing.",
)
@click.option(
    "--threshold-M",
    "threshold_m",
    type=int,
    default=DEFAULT_INTERVAL_THRESHOLD,
    show_default=True,
    help="Max trend intervals reported verbatim before switching to the steepest ones.",
)
@click.option(
    "--top-k",
    type=int,
    default=DEFAULT_TOP_K,
    show_default=True,
    help="How many steepest intervals to keep above the threshold.",
)
@click.pass_context
def describe(
    ctx: click.Context,
    paths: tuple[Path, ...],
    output_format: str,
    out_dir: Optional[Path],
    threshold_m: int,
    top_k: int,
):
    """Describe one or more chart bundle directories.

    Bundles are processed independently; a failing bundle is reported on
    stderr and the rest still produce output.  Exit status is nonzero when
    any bundle failed.
    """
    config = FactsConfig(interval_threshold=threshold_m, top_k=top_k)
    templates = load_templates()
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    failures = 0
    for path in paths:
        try:
            bundle, description = _describe_bundle(path, config, templates)
        except (ChartScribeError, OSError) as exc:
            failures += 1
            click.echo(f"error: {path}: {type(exc).__name__}: {exc}", err=True)
            continue
        if output_format == "json":
            payload = {"id": bundle.metadata.id, **description_to_json(description)}
            rendered = json.dumps(payload, ensure_ascii=False)
        else:
            rendered = description.text
        if out_dir is not None:
            suffix = ".json" if output_format == "json" else ".txt"
            (out_dir / f"{bundle.metadata.id}{suffix}").write_text(rendered + "\n", "utf-8")
        else:
            click.echo(rendered)
    if failures:
        ctx.exit(1)


@main.command()
@click.option(
    "--addr",
    default="127.0.0.1:8031",
    show_default=True,
    help="host:port to listen on.",
)
def serve(addr: str):
    """Run the HTTP service over CHARTSCRIBE_STORE_DIR."""
    import uvicorn

    host, _, port_text = addr.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        raise click.BadParameter(f"expected host:port, got {addr!r}", param_hint="--addr")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=port)


@main.command("import")
@click.argument("remote_id")
@click.pass_context
def import_chart(ctx: click.Context, remote_id: str):
    """Fetch a chart from the remote API and store it locally."""
    base = os.environ.get("CHARTSCRIBE_REMOTE_BASE")
    if not base:
        click.echo("error: CHARTSCRIBE_REMOTE_BASE is not set", err=True)
        ctx.exit(2)
    try:
        bundle = fetch_chart(remote_id, RemoteConfig(base_url=base))
        store_dir = Path(os.environ.get("CHARTSCRIBE_STORE_DIR") or "charts")
        path = save_bundle(bundle, store_dir / bundle.metadata.id)
    except ChartScribeError as exc:
        click.echo(f"error: {remote_id}: {type(exc).__name__}: {exc}", err=True)
        ctx.exit(1)
    click.echo(f"imported {bundle.metadata.id} to {path}")


if __name__ == "__main__":
    main()
