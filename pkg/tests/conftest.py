import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chartscribe.ingestion import load_bundle

FIXTURES = Path(__file__).parent.parent / "fixtures"
SUITE_TIME_BUDGET = 60.0


def pytest_configure(config):
    config._suite_started = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - config._suite_started
    outcome = "PASS" if elapsed < SUITE_TIME_BUDGET else "FAIL"
    terminalreporter.write_line(
        f"[{outcome}] suite wall time {elapsed:.1f}s (budget {SUITE_TIME_BUDGET:.0f}s)"
    )


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - session.config._suite_started
    if elapsed >= SUITE_TIME_BUDGET and exitstatus == 0:
        session.exitstatus = 1
FIXTURE_IDS = [
    "area-temperature",
    "bar-population",
    "groupedcolumn-trade",
    "line-gdp",
    "pie-budget",
    "stackedbar-energy",
]


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def bundles():
    return {name: load_bundle(FIXTURES / name) for name in FIXTURE_IDS}


@pytest.fixture(scope="session")
def line_bundle(bundles):
    return bundles["line-gdp"]


@pytest.fixture(scope="session")
def bar_bundle(bundles):
    return bundles["bar-population"]


@pytest.fixture(scope="session")
def grouped_bundle(bundles):
    return bundles["groupedcolumn-trade"]


@pytest.fixture(scope="session")
def pie_bundle(bundles):
    return bundles["pie-budget"]
