import time

import pytest

from repdigits.bounds import Mode
from repdigits.solver import run_suite

ACCEPTANCE_LINES = []
SUITE_SECONDS = {}


@pytest.fixture(scope="session")
def record():
    def _record(criterion: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"{criterion}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
        return ok
    return _record


def _suite(mode):
    start = time.perf_counter()
    s = run_suite(range(2, 13), 10, mode)
    SUITE_SECONDS[mode] = time.perf_counter() - start
    return s


@pytest.fixture(scope="session")
def sum_suite():
    return _suite(Mode.SUM)


@pytest.fixture(scope="session")
def diff_suite():
    return _suite(Mode.DIFF)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
