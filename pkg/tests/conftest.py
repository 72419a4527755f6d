import numpy as np
import pytest

from sphereosc.background import BackgroundModel, FluctuationMode
from sphereosc.basis import BasisSpec
from sphereosc.dynamics import spectrum_of
from sphereosc.hamiltonian import build_operator_set

# lowest allowed gap 0 -> 5 at R0 = 5, n_max = 8
GAP_05 = 2.1606448677547


@pytest.fixture(scope="session")
def basis8():
    return BasisSpec(8)


@pytest.fixture(scope="session")
def model_static():
    return BackgroundModel(5.0)


@pytest.fixture(scope="session")
def model_resonant():
    return BackgroundModel(5.0, (FluctuationMode(1e-3, GAP_05),))


@pytest.fixture(scope="session")
def ops8(basis8):
    return build_operator_set(basis8, 0.04)


@pytest.fixture(scope="session")
def spec8(ops8):
    return spectrum_of(ops8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def report():
    """Record one pass/fail line for an acceptance criterion; returns the verdict."""

    def record(criterion, passed, detail):
        line = f"criterion {criterion:<4} {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
