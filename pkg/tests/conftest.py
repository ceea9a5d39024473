import numpy as np
import pytest

from uncertainty_bounds.operators import spin_basis_state, spin_operator

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def spin1():
    return {c: spin_operator(1, c) for c in "xyz"}


@pytest.fixture(scope="session")
def kets():
    return {m: spin_basis_state(1, m) for m in (1, 0, -1)}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
