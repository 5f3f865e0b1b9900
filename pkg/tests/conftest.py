import numpy as np
import pytest

from wgsrandom.statevec import StateVector

ACCEPTANCE_LINES = []


def random_state(n, rng):
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector.from_amplitudes(z)


def kron_all(ops):
    """Kronecker product with qubit 0 as the least significant factor."""
    out = np.eye(1)
    for op in ops:
        out = np.kron(op, out)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
