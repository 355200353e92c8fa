import numpy as np
import pytest

from raina_hh import CoefficientSequence, RainaKernel

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Register a pass/fail line for the acceptance summary."""

    def record(name: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def ml_kernel():
    return RainaKernel(1.0, 1.0, 1.0, CoefficientSequence.constant(1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
