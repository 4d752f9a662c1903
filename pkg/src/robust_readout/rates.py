"""Rate generators for a truncated bosonic Fock ladder and their propagators.

Generators are stored column-as-source: ``K[i, j]`` is the rate from level
``j`` into level ``i``, so populations evolve as ``p' = K p``.  Transition
matrices are stored row-as-source: ``T[i, j]`` is the probability of going
from level ``i`` to level ``j`` in one readout step.  The single transpose
between the two conventions lives in :func:`transition_matrix`.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, exp, expm1

import numpy as np

__all__ = [
    "RateGenerator",
    "StochasticMatrix",
    "decay_generator",
    "heating_generator",
    "transition_matrix",
    "decay_transition_closed_form",
    "expected_decay_time",
    "expm",
]


@dataclass(frozen=True, eq=False)
class RateGenerator:
    """Birth-death generator over levels ``0..dim-1`` (column-as-source)."""

    entries: np.ndarray
    kappa_down: float = 0.0
    kappa_up: float = 0.0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"generator must be square, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def L(self) -> int:
        return self.dim - 1

    def __add__(self, other: "RateGenerator") -> "RateGenerator":
        if other.dim != self.dim:
            raise ValueError("cannot add generators of different dimension")
        return RateGenerator(
            self.entries + other.entries,
            kappa_down=self.kappa_down + other.kappa_down,
            kappa_up=self.kappa_up + other.kappa_up,
        )


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Row-stochastic transition matrix for one step of duration ``tau``."""

    entries: np.ndarray
    tau: float

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]


def _check_level(L: int) -> None:
    if int(L) != L or L < 1:
        raise ValueError(f"L must be an integer >= 1, got {L!r}")


def decay_generator(L: int, kappa_down: float) -> RateGenerator:
    """Single-excitation loss generator: level ``j`` decays to ``j-1`` at ``j*kappa_down``."""
    _check_level(L)
    if kappa_down < 0:
        raise ValueError(f"kappa_down must be nonnegative, got {kappa_down}")
    K = np.zeros((L + 1, L + 1))
    for j in range(1, L + 1):
        K[j, j] = -j * kappa_down
        K[j - 1, j] = j * kappa_down
    return RateGenerator(K, kappa_down=kappa_down)


def heating_generator(L: int, kappa_up: float) -> RateGenerator:
    """Single-excitation gain generator, truncated so the top level ``L`` cannot heat.

    Level ``j < L`` is promoted to ``j+1`` at rate ``(j+1)*kappa_up``.
    """
    _check_level(L)
    if kappa_up < 0:
        raise ValueError(f"kappa_up must be nonnegative, got {kappa_up}")
    K = np.zeros((L + 1, L + 1))
    for j in range(L):
        K[j, j] = -(j + 1) * kappa_up
        K[j + 1, j] = (j + 1) * kappa_up
    return RateGenerator(K, kappa_up=kappa_up)


def expm(A: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series.

    The scaling ``s`` makes ``||A / 2**s||_1 < 0.5``; the series stops once the
    next term's 1-norm drops below ``1e-16``.  Intended for the small,
    well-conditioned birth-death generators built in this module.
    """
    A = np.asarray(A, dtype=float)
    norm = np.abs(A).sum(axis=0).max() if A.size else 0.0
    s = 0
    while norm / 2.0**s >= 0.5:
        s += 1
    B = A / 2.0**s
    result = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for k in range(1, 64):
        term = term @ B / k
        result = result + term
        if np.abs(term).sum(axis=0).max() < 1e-16:
            break
    for _ in range(s):
        result = result @ result
    return result


def transition_matrix(gen: RateGenerator, tau: float) -> StochasticMatrix:
    """Propagate ``gen`` for a duration ``tau``: ``T[i, j] = expm(K tau)[j, i]``."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    P = expm(gen.entries * tau).T
    # roundoff can leave entries like -1e-19 on structurally zero positions
    P = np.clip(P, 0.0, 1.0)
    return StochasticMatrix(P, tau=tau)


def decay_transition_closed_form(i: int, j: int, kappa_tau: float) -> float:
    """Probability that level ``i`` has decayed to level ``j`` after ``kappa_down*tau``.

    Binomial thinning: each of the ``i`` excitations survives independently
    with probability ``exp(-kappa_tau)``.
    """
    if j > i or j < 0:
        return 0.0
    return comb(i, j) * expm1(kappa_tau) ** (i - j) * exp(-i * kappa_tau)


def expected_decay_time(L: int, kappa_down: float) -> float:
    """Mean first-passage time from ``|L>`` to vacuum, ``H_L / kappa_down``."""
    _check_level(L)
    if kappa_down <= 0:
        raise ValueError("kappa_down must be positive for a finite decay time")
    return sum(1.0 / n for n in range(1, L + 1)) / kappa_down
