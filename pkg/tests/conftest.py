from __future__ import annotations

import time

import pytest

from apexforest.enumeration import census

# acceptance outcomes, printed once at the end of the run
CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion.

    Usage: ``criterion("2", ok, "detail")``; the summary prints every line
    even when the test itself is an expected failure.
    """

    def record(key: str, ok: bool, detail: str) -> bool:
        CRITERIA[key] = ("PASS" if ok else "FAIL", detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")

    def order(key: str):
        head = key.rstrip("abcdefghijklmnopqrstuvwxyz")
        return (int(head), key)

    for key in sorted(CRITERIA, key=order):
        status, detail = CRITERIA[key]
        terminalreporter.write_line(f"criterion {key:<3} {status}  {detail}")


@pytest.fixture(scope="session")
def censuses():
    """Full censuses for n = 1..7 at kmax = 2, with their wall-clock time."""
    start = time.perf_counter()
    records = {n: census(n, kmax=2) for n in range(1, 8)}
    return records, time.perf_counter() - start


@pytest.fixture(scope="session")
def small_censuses():
    return {n: census(n, kmax=2) for n in range(1, 7)}
