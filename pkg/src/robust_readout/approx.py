"""Dominant-process approximations to the majority-vote infidelity.

Each readout configuration has a "full" form that keeps the exact
probabilities of the two or three dominant failure processes, and a
"leading" form that keeps only the lowest-order monomials.  Nothing here is
clamped to ``[0, 1]``; use :func:`validity_flags` to see whether the small
parameter expansion is trustworthy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, comb, factorial
from typing import Optional, Tuple

from .rates import decay_generator, decay_transition_closed_form, expm, heating_generator, transition_matrix

__all__ = [
    "ApproxInputs",
    "validity_flags",
    "binomial_tail",
    "approx_decay_full",
    "approx_decay_leading",
    "approx_heating_full",
    "approx_heating_leading",
    "approx_multilevel_leading",
    "approx_fidelity_cat",
    "approx_fidelity_binomial",
]

VALIDITY_THRESHOLD = 0.5


def _half(N: int) -> int:
    return ceil(N / 2)


def validity_flags(N: int, delta: float, kd_tau: float = 0.0, ku_tau: float = 0.0) -> Tuple[str, ...]:
    """Names of the small parameters whose ``N * x`` reaches 0.5."""
    flags = []
    for name, x in (("N*delta", delta), ("N*kd_tau", kd_tau), ("N*ku_tau", ku_tau)):
        if N * x >= VALIDITY_THRESHOLD:
            flags.append(name)
    return tuple(flags)


@dataclass(frozen=True)
class ApproxInputs:
    L: int
    N: int
    delta: float
    kd_tau: float = 0.0
    ku_tau: float = 0.0
    m: int = 0
    code: Optional[object] = None
    flags: Tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not 0 <= self.m < self.L:
            raise ValueError(f"threshold m must satisfy 0 <= m < L, got m={self.m}, L={self.L}")
        for name in ("delta", "kd_tau", "ku_tau"):
            value = getattr(self, name)
            if not 0 <= value < 1:
                raise ValueError(f"{name} must lie in [0, 1), got {value}")
        object.__setattr__(self, "flags", validity_flags(self.N, self.delta, self.kd_tau, self.ku_tau))


def binomial_tail(N: int, delta: float, upper: Optional[int] = None) -> float:
    """Probability of at least ``ceil(N/2)`` misleading readouts out of ``N``.

    ``upper`` truncates the sum (the compatibility reading with upper limit L).
    """
    top = N if upper is None else min(upper, N)
    return sum(comb(N, k) * delta**k * (1 - delta) ** (N - k) for k in range(_half(N), top + 1))


def approx_decay_full(
    L: int, N: int, delta: float, kd_tau: float, tail_upper_L: bool = False
) -> Tuple[float, float]:
    """``(P(0|L), P(L|0))`` keeping vote-flip errors without decay and
    complete decay by step ``ceil(N/2)`` without readout errors.

    With ``tail_upper_L`` the binomial tail stops at ``min(L, N)``.
    """
    tail = binomial_tail(N, delta, L if tail_upper_L else None)
    survive = decay_transition_closed_form(L, L, N * kd_tau)
    decayed = decay_transition_closed_form(L, 0, _half(N) * kd_tau)
    p0L = survive * tail + decayed * (1 - delta) ** N
    return p0L, tail


def approx_decay_leading(L: int, N: int, delta: float, kd_tau: float) -> float:
    k = _half(N)
    return 2 * comb(N, k) * delta**k + (k * kd_tau) ** L


def approx_heating_full(
    L: int, m: int, N: int, delta: float, kd_tau: float, ku_tau: float, tail_upper_L: bool = False
) -> Tuple[float, float]:
    """``(P(0|L), P(L|0))`` with the added process of ``|0>`` heating past the threshold.

    The decay term uses the loss-only propagator from ``|L>`` down to ``|m>``
    and the heating term the gain-only propagator from ``|0>`` up to
    ``|m+1>``, both over ``ceil(N/2)`` steps.
    """
    if not 0 <= m < L:
        raise ValueError(f"threshold m must satisfy 0 <= m < L, got m={m}, L={L}")
    k = _half(N)
    tail = binomial_tail(N, delta, L if tail_upper_L else None)
    gen = decay_generator(L, kd_tau) + heating_generator(L, ku_tau)
    T_N = transition_matrix(gen, float(N))
    # column-as-source generators: entry [to, from]
    down = expm(decay_generator(L, kd_tau).entries * k)[m, L]
    up = expm(heating_generator(L, ku_tau).entries * k)[m + 1, 0]
    p0L = T_N[L, L] * tail + (1 - delta) ** N * down
    pL0 = T_N[0, 0] * tail + (1 - delta) ** N * up
    return float(p0L), float(pL0)


def approx_heating_leading(L: int, m: int, N: int, delta: float, kd_tau: float, ku_tau: float) -> float:
    k = _half(N)
    return comb(L, m) * (k * kd_tau) ** (L - m) + (k * ku_tau) ** (m + 1) + 2 * comb(N, k) * delta**k


def approx_multilevel_leading(L: int, m: int, N: int, delta: float, kd_tau: float, ku_tau: float) -> float:
    """Leading-order majority-vote infidelity for the (L+1)-level ancilla.

    A readout error lands on one of ``L`` wrong symbols uniformly, so a vote
    flips with probability ``(m+1)/L * delta`` from ``|L>`` and
    ``(L-m)/L * delta`` from ``|0>``.
    """
    k = _half(N)
    votes = comb(N, k) * (((m + 1) * delta / L) ** k + ((L - m) * delta / L) ** k)
    return comb(L, m) * (k * kd_tau) ** (L - m) + (k * ku_tau) ** (m + 1) + votes


def approx_fidelity_cat(L: int, N: int, delta: float, kd_tau: float, alpha: float) -> float:
    """Majority-vote fidelity of a cat code whose codewords share residues mod ``2L``."""
    k = _half(N)
    return 1 - 2 * comb(N, k) * delta**k - 2 / factorial(L) * (abs(alpha) ** 2 * k * kd_tau) ** L


def approx_fidelity_binomial(L: int, M: int, N: int, delta: float, kd_tau: float) -> float:
    if L < 1 or M < 1:
        raise ValueError("binomial code needs L >= 1 and M >= 1")
    k = _half(N)
    return 1 - 2 * comb(N, k) * delta**k - 2 / factorial(L) * (L * M / 2 * k * kd_tau) ** L
