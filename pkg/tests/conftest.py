import numpy as np
import pytest


ACCEPTANCE: dict = {}


@pytest.fixture
def nprng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance(request):
    """Record ``(passed, detail)`` for one acceptance criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE[number] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
