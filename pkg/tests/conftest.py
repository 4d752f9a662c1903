import itertools

import numpy as np
import pytest

# Parameters of the circuit-QED example used throughout the figures.
DELTA = 0.02
KD_TAU = 0.01
KU_TAU = 0.005

ACCEPTANCE_LINES = []


def brute_force_likelihood(T, E, start, symbols):
    """Sum over every hidden path explicitly; independent of the forward recursion."""
    dim = T.shape[0]
    N = len(symbols)
    paths = np.array(list(itertools.product(range(dim), repeat=N)), dtype=np.int64).reshape(-1, N)
    prev = np.concatenate([np.full((paths.shape[0], 1), start), paths[:, :-1]], axis=1)
    factors = T[prev, paths] * E[paths, np.asarray(symbols)[None, :]]
    return float(np.prod(factors, axis=1).sum())


@pytest.fixture
def fig_params():
    return dict(delta=DELTA, kd_tau=KD_TAU, ku_tau=KU_TAU)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
