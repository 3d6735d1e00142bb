"""Shared fixtures and the acceptance summary hook."""

import json
import pathlib

import pytest

from elegantprimes.primes import build_pool

DATA_DIR = pathlib.Path(__file__).parent / "data"

# criterion number -> (label, "PASS" | "FAIL" | "SKIP")
ACCEPTANCE_RESULTS = {}


def record_criterion(num: int, label: str, status: str) -> None:
    ACCEPTANCE_RESULTS[num] = (label, status)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        label, status = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num} [{label}]: {status}")


@pytest.fixture(scope="session")
def pool11():
    return build_pool(11)


@pytest.fixture(scope="session")
def oracle_counts():
    with open(DATA_DIR / "oracle_counts.json") as f:
        return json.load(f)


@pytest.fixture(scope="session")
def algo1_seeds():
    """Pinned first succeeding seed per n for the coverage criterion."""
    with open(DATA_DIR / "algo1_seeds.json") as f:
        return {int(k): v for k, v in json.load(f).items()}
