"""Capture real service responses for the frontend test stub.

The vitest suite replays these verbatim, so UI tests exercise the same
bytes the service produces without running Python in the test process.

Run from the repository root after installing the package:

    python3 frontend/scripts/record.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from chartscribe.service import create_app

ROOT = Path(__file__).resolve().parents[2]
OUT = ROOT / "frontend" / "tests" / "fixtures" / "recordings.json"


def request_body(ids, choices=None, edits=None, context=""):
    return {
        "selected_feature_ids": ids,
        "variable_choices": choices or {},
        "manual_edits": edits or {},
        "context_text": context,
    }


GETS = [
    "/api/charts",
    "/api/charts?type=pie",
    # No fixture has this type; exercises the gallery empty state.
    "/api/charts?type=column",
    "/api/charts/line-gdp",
    "/api/charts/line-gdp/features",
    "/api/charts/line-gdp/svg",
    "/api/charts/groupedcolumn-trade",
    "/api/charts/groupedcolumn-trade/features",
    "/api/charts/groupedcolumn-trade/svg",
]

EDIT = {"general.type": "Hand-tuned opening."}

POSTS = [
    ("/api/charts/line-gdp/description", request_body(["general.type"])),
    ("/api/charts/line-gdp/description", request_body(["general.type", "fact.extrema"])),
    ("/api/charts/line-gdp/description", request_body(["fact.extrema", "general.type"])),
    (
        "/api/charts/line-gdp/description",
        request_body(["general.type", "fact.extrema"], edits=EDIT),
    ),
    (
        "/api/charts/line-gdp/description",
        request_body(["general.type", "fact.extrema", "fact.trend"], edits=EDIT),
    ),
    ("/api/charts/line-gdp/description", request_body([])),
    (
        "/api/charts/groupedcolumn-trade/description",
        request_body(["fact.extrema"], choices={"fact.extrema": ["Services"]}),
    ),
    (
        "/api/charts/groupedcolumn-trade/description",
        request_body(["fact.extrema"], choices={"fact.extrema": ["Exports"]}),
    ),
    (
        "/api/charts/groupedcolumn-trade/description",
        request_body(["fact.comparison"], choices={"fact.comparison": ["Exports", "Imports"]}),
    ),
    (
        "/api/charts/line-gdp/description",
        request_body(["general.type", "context.note"], context="Shown in the annual report."),
    ),
    # Checking the context feature before typing any context text.
    ("/api/charts/line-gdp/description", request_body(["general.type", "context.note"])),
    ("/api/charts/groupedcolumn-trade/description", request_body([])),
]


def main():
    client = TestClient(create_app(store_dir=ROOT / "fixtures"))
    entries = []
    for path in GETS:
        resp = client.get(path)
        resp.raise_for_status()
        entries.append(
            {
                "method": "GET",
                "path": path,
                "body": None,
                "status": resp.status_code,
                "content_type": resp.headers["content-type"],
                "text": resp.text,
            }
        )
    for path, body in POSTS:
        resp = client.post(path, json=body)
        resp.raise_for_status()
        entries.append(
            {
                "method": "POST",
                "path": path,
                "body": body,
                "status": resp.status_code,
                "content_type": resp.headers["content-type"],
                "text": resp.text,
            }
        )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(entries, indent=1) + "\n")
    print(f"wrote {len(entries)} recordings to {OUT}")


if __name__ == "__main__":
    main()
