"""Hidden Markov model of repeated ancilla-assisted readout.

Each readout step is a transition of the bosonic level (``T``) followed by a
noisy ancilla emission (``E``).  The initial level never emits.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .rates import (
    StochasticMatrix,
    decay_generator,
    heating_generator,
    transition_matrix,
)

__all__ = [
    "EmissionMatrix",
    "HmmModel",
    "OutcomeSequence",
    "emission_two_level",
    "emission_multilevel",
    "decay_model",
    "heating_model",
    "multilevel_model",
    "likelihood",
    "forward",
]

TWO_LEVEL = "two-level"
MULTI_LEVEL = "multi-level"


@dataclass(frozen=True, eq=False)
class EmissionMatrix:
    """``entries[i, a]`` is the probability that level ``i`` yields ancilla symbol ``a``."""

    entries: np.ndarray
    delta: float
    kind: str
    threshold_m: Optional[int] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def states(self) -> int:
        return self.entries.shape[0]

    @property
    def symbols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class OutcomeSequence:
    """An ordered record of ancilla readout symbols drawn from ``range(alphabet)``."""

    symbols: tuple
    alphabet: int = 2

    def __post_init__(self):
        symbols = tuple(int(a) for a in self.symbols)
        for a in symbols:
            if not 0 <= a < self.alphabet:
                raise ValueError(f"symbol {a} outside alphabet of size {self.alphabet}")
        object.__setattr__(self, "symbols", symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @classmethod
    def from_index(cls, index: int, N: int, alphabet: int = 2) -> "OutcomeSequence":
        """Decode a canonical sequence index (first readout is the most significant digit)."""
        digits = []
        for _ in range(N):
            index, a = divmod(index, alphabet)
            digits.append(a)
        if index:
            raise ValueError("index too large for sequence length")
        return cls(tuple(reversed(digits)), alphabet)

    def to_index(self) -> int:
        index = 0
        for a in self.symbols:
            index = index * self.alphabet + a
        return index


def emission_two_level(L: int, m: int, delta: float) -> EmissionMatrix:
    """Two-level ancilla: levels ``<= m`` map to ``g`` (0), levels ``> m`` to ``e`` (1).

    ``delta`` is the probability of a misleading readout.
    """
    if not 0 <= m < L:
        raise ValueError(f"threshold m must satisfy 0 <= m < L, got m={m}, L={L}")
    if not 0 <= delta < 0.5:
        raise ValueError(f"two-level delta must lie in [0, 1/2), got {delta}")
    E = np.empty((L + 1, 2))
    for i in range(L + 1):
        intended = 0 if i <= m else 1
        E[i, intended] = 1.0 - delta
        E[i, 1 - intended] = delta
    return EmissionMatrix(E, delta=delta, kind=TWO_LEVEL, threshold_m=m)


def emission_multilevel(L: int, delta: float) -> EmissionMatrix:
    """(L+1)-level ancilla: correct symbol with ``1-delta``, each wrong one with ``delta/L``.

    Here ``delta`` is the total off-diagonal mass, not a misleading-vote probability.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not 0 <= delta < 1:
        raise ValueError(f"multi-level delta must lie in [0, 1), got {delta}")
    E = np.full((L + 1, L + 1), delta / L)
    np.fill_diagonal(E, 1.0 - delta)
    return EmissionMatrix(E, delta=delta, kind=MULTI_LEVEL)


@dataclass(frozen=True, eq=False)
class HmmModel:
    """Transition and emission matrices plus the number of readouts ``N``.

    The two hypotheses are the initial levels ``0`` and ``L``.  ``m`` is the
    vote threshold used by majority voting (ancilla symbol for two-level
    models is already thresholded inside ``E``).
    """

    T: StochasticMatrix
    E: EmissionMatrix
    N: int
    m: int = 0
    kd_tau: float = 0.0
    ku_tau: float = 0.0

    def __post_init__(self):
        if self.T.dim != self.E.states:
            raise ValueError(f"T has {self.T.dim} levels but E has {self.E.states}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if self.E.kind == MULTI_LEVEL and not 0 <= self.m < self.L:
            raise ValueError(f"threshold m must satisfy 0 <= m < L, got m={self.m}")

    @property
    def L(self) -> int:
        return self.T.dim - 1

    @property
    def alphabet(self) -> int:
        return self.E.symbols

    @property
    def delta(self) -> float:
        return self.E.delta

    @property
    def kind(self) -> str:
        return self.E.kind

    @property
    def hypotheses(self) -> tuple:
        return (0, self.L)

    @property
    def vote_threshold(self) -> int:
        """Symbols strictly above this count as votes for ``|L>``."""
        return self.m if self.kind == MULTI_LEVEL else 0

    def with_N(self, N: int) -> "HmmModel":
        return HmmModel(self.T, self.E, N, m=self.m, kd_tau=self.kd_tau, ku_tau=self.ku_tau)

    def check_underflow(self) -> None:
        """Reject ``N`` large enough that the weakest emission factor underflows."""
        E = self.E.entries
        smallest = E[E > 0].min()
        if smallest ** self.N < sys.float_info.min:
            raise ValueError(
                f"likelihoods underflow: min emission {smallest:g} to the power N={self.N}"
            )


def _propagator(L: int, kd_tau: float, ku_tau: float) -> StochasticMatrix:
    gen = decay_generator(L, kd_tau) + heating_generator(L, ku_tau)
    return transition_matrix(gen, 1.0)


def decay_model(L: int, N: int, delta: float, kd_tau: float) -> HmmModel:
    """Fock encoding ``{|0>, |L>}`` under pure loss with a two-level ancilla."""
    return heating_model(L, 0, N, delta, kd_tau, 0.0)


def heating_model(L: int, m: int, N: int, delta: float, kd_tau: float, ku_tau: float) -> HmmModel:
    """Loss and heating, two-level ancilla thresholded at level ``m``."""
    T = _propagator(L, kd_tau, ku_tau)
    E = emission_two_level(L, m, delta)
    return HmmModel(T, E, N, m=m, kd_tau=kd_tau, ku_tau=ku_tau)


def multilevel_model(L: int, m: int, N: int, delta: float, kd_tau: float, ku_tau: float) -> HmmModel:
    """Loss and heating, (L+1)-level ancilla; ``m`` only affects majority voting."""
    T = _propagator(L, kd_tau, ku_tau)
    E = emission_multilevel(L, delta)
    return HmmModel(T, E, N, m=m, kd_tau=kd_tau, ku_tau=ku_tau)


def forward(T: np.ndarray, E: np.ndarray, start: np.ndarray, symbols: Sequence[int]) -> np.ndarray:
    """Unnormalized forward vector after emitting ``symbols`` from distribution ``start``."""
    alpha = np.asarray(start, dtype=float)
    for a in symbols:
        alpha = (alpha @ T) * E[:, a]
    return alpha


def likelihood(model: HmmModel, hypothesis: int, seq) -> float:
    """Probability of the readout record ``seq`` given initial level ``hypothesis``."""
    if hypothesis not in model.hypotheses:
        raise ValueError(f"hypothesis must be 0 or L={model.L}, got {hypothesis}")
    if not isinstance(seq, OutcomeSequence):
        seq = OutcomeSequence(tuple(seq), model.alphabet)
    if seq.alphabet != model.alphabet:
        raise ValueError(f"sequence alphabet {seq.alphabet} != model alphabet {model.alphabet}")
    if len(seq) != model.N:
        raise ValueError(f"sequence length {len(seq)} != N={model.N}")
    start = np.zeros(model.L + 1)
    start[hypothesis] = 1.0
    return float(forward(model.T.entries, model.E.entries, start, seq.symbols).sum())
