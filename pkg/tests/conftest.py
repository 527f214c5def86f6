import warnings

import numpy as np
import pytest

from kasha.band import band_exact
from kasha.coupling import AggregateSpec, coupling_matrices
from kasha.dynamics import build_effective_hamiltonian
from kasha.modes import UnderdampingWarning, equidistant_modes

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])


@pytest.fixture(scope="session")
def chain20():
    spec = AggregateSpec.chain(20, 0.0126)
    return spec, coupling_matrices(spec)


@pytest.fixture(scope="session")
def small_system():
    """N = 3 chain with two equidistant modes, s = 0.1: dimension 21."""
    spec = AggregateSpec.chain(3, 0.0126)
    c = coupling_matrices(spec)
    modes = equidistant_modes(2, c.omega_nn, 0.1)
    h = build_effective_hamiltonian(spec.with_modes(modes), c)
    return h, band_exact(c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def quiet_modes():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderdampingWarning)
        yield
