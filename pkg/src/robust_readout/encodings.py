"""Fock, cat and binomial encodings: Fock-space expansions, loss moments, Kraus probabilities.

Cat codewords ``|C^n>`` live on the Fock states ``k = n (mod 2L)``.  The
logical states are ``|0>_B = |C^L>`` and ``|1>_B = |C^{2L}>``; the latter is
the residue-0 class and so contains the vacuum.

Binomial codewords are handled in exact rational arithmetic: their Fock
populations are ``C(M, p) / 2**(M-1)`` on ``|pL>`` for ``p`` of one parity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .approx import approx_decay_leading, approx_fidelity_binomial, approx_fidelity_cat

__all__ = [
    "FockCode",
    "CatCode",
    "BinomialCode",
    "CodeParams",
    "TAIL_TOLERANCE",
    "cat_min_truncation",
    "cat_normalization",
    "cat_populations",
    "cat_codeword",
    "cat_loss_moment",
    "cat_moment_power",
    "binomial_populations",
    "binomial_codeword",
    "binomial_mean_photon",
    "binomial_loss_moment",
    "binomial_moment_power",
    "falling_factorial",
    "kraus_loss_probability",
    "kraus_loss_probability_exact",
]

TAIL_TOLERANCE = 1e-14


def falling_factorial(n: int, order: int) -> int:
    """``n (n-1) ... (n-order+1)``, zero when ``order > n``."""
    return math.perm(n, order) if order <= n else 0


# -- cat codes ---------------------------------------------------------------


def cat_min_truncation(alpha: float, twoL: int) -> int:
    """Smallest Fock cutoff accepted for a cat state of amplitude ``alpha``."""
    nbar = abs(alpha) ** 2
    return math.ceil(nbar + 10 * math.sqrt(nbar) + twoL)


def _log_poisson(k: np.ndarray, nbar: float) -> np.ndarray:
    if nbar == 0:
        return np.where(k == 0, 0.0, -np.inf)
    return -nbar + k * math.log(nbar) - np.array([math.lgamma(x + 1) for x in k])


def _poisson_tail_bound(nbar: float, truncation: int) -> float:
    # ratio test: terms beyond the cutoff shrink by at least nbar/(truncation+2)
    ratio = nbar / (truncation + 2)
    if ratio >= 1:
        return math.inf
    head = math.exp(_log_poisson(np.array([truncation + 1]), nbar)[0])
    return head / (1 - ratio)


def _check_truncation(alpha: float, twoL: int, truncation: Optional[int]) -> int:
    if twoL < 2 or twoL % 2:
        raise ValueError(f"twoL must be a positive even integer, got {twoL}")
    minimum = cat_min_truncation(alpha, twoL)
    nbar = abs(alpha) ** 2
    if truncation is None:
        truncation = minimum
        while _poisson_tail_bound(nbar, truncation) > TAIL_TOLERANCE:
            truncation += twoL
    if truncation < minimum:
        raise ValueError(f"truncation {truncation} below the minimum {minimum} for alpha={alpha}")
    tail = _poisson_tail_bound(nbar, truncation)
    if tail > TAIL_TOLERANCE:
        raise ValueError(f"Poisson tail beyond truncation {truncation} is {tail:.3g} > {TAIL_TOLERANCE}")
    return truncation


def _residue_levels(twoL: int, n: int, truncation: int) -> np.ndarray:
    return np.arange(n % twoL, truncation + 1, twoL)


def cat_normalization(alpha: float, twoL: int, n: int, truncation: Optional[int] = None) -> float:
    """Poisson weight of the residue class ``n (mod 2L)``: the squared norm
    of the unnormalised Fock series of ``|C^n>``."""
    truncation = _check_truncation(alpha, twoL, truncation)
    k = _residue_levels(twoL, n, truncation)
    return float(np.exp(_log_poisson(k, abs(alpha) ** 2)).sum())


def cat_populations(alpha: float, twoL: int, n: int, truncation: Optional[int] = None) -> np.ndarray:
    """Photon-number distribution of ``|C^n>`` over Fock levels ``0..truncation``."""
    truncation = _check_truncation(alpha, twoL, truncation)
    k = _residue_levels(twoL, n, truncation)
    weights = np.exp(_log_poisson(k, abs(alpha) ** 2))
    total = weights.sum()
    if total == 0:
        raise ValueError(f"residue class {n} mod {twoL} carries no weight at alpha={alpha}")
    probs = np.zeros(truncation + 1)
    probs[k] = weights / total
    return probs


def cat_codeword(alpha: float, twoL: int, n: int, truncation: Optional[int] = None) -> np.ndarray:
    """Fock amplitudes of ``|C^n>`` for real ``alpha`` (phases are all +1)."""
    return np.sqrt(cat_populations(alpha, twoL, n, truncation))


def cat_loss_moment(alpha: float, twoL: int, n: int, order: int, truncation: Optional[int] = None) -> float:
    """Exact ``<a^dag^order a^order>`` of ``|C^n>`` (a falling-factorial moment)."""
    probs = cat_populations(alpha, twoL, n, truncation)
    ff = np.array([falling_factorial(k, order) for k in range(probs.size)], dtype=float)
    return float(probs @ ff)


def cat_moment_power(alpha: float, order: int) -> float:
    """Large-amplitude approximation ``|alpha|**(2*order)`` of :func:`cat_loss_moment`."""
    return abs(alpha) ** (2 * order)


# -- binomial codes -----------------------------------------------------------


def binomial_populations(L: int, M: int, parity: int) -> Dict[int, Fraction]:
    """Exact Fock populations of the binomial codeword with ``p % 2 == parity``."""
    if L < 1 or M < 1:
        raise ValueError("binomial code needs L >= 1 and M >= 1")
    norm = 2 ** (M - 1)
    return {p * L: Fraction(math.comb(M, p), norm) for p in range(M + 1) if p % 2 == parity}


def binomial_codeword(L: int, M: int, parity: int) -> np.ndarray:
    pops = binomial_populations(L, M, parity)
    vec = np.zeros(L * M + 1)
    for k, w in pops.items():
        vec[k] = math.sqrt(w)
    return vec


def binomial_loss_moment(L: int, M: int, parity: int, order: int) -> Fraction:
    pops = binomial_populations(L, M, parity)
    return sum((w * falling_factorial(k, order) for k, w in pops.items()), Fraction(0))


def binomial_mean_photon(L: int, M: int) -> Tuple[float, float]:
    """Exact mean photon number of ``(|0>_B, |1>_B)``; their average is ``L*M/2``."""
    return tuple(float(binomial_loss_moment(L, M, parity, 1)) for parity in (0, 1))


def binomial_moment_power(L: int, M: int, order: Optional[int] = None) -> float:
    """Mean-photon approximation ``(L*M/2)**order`` (``order`` defaults to ``L``)."""
    return (L * M / 2) ** (L if order is None else order)


# -- loss channel ------------------------------------------------------------


def kraus_loss_probability(mean_falling_moment: float, L_loss: int, kd_tau_total: float) -> float:
    """Small-loss probability of exactly ``L_loss`` losses: ``(kt)**L / L! * <a^dag^L a^L>``."""
    if mean_falling_moment < 0 or L_loss < 0 or kd_tau_total < 0:
        raise ValueError("inputs must be nonnegative")
    return kd_tau_total**L_loss / math.factorial(L_loss) * mean_falling_moment


def kraus_loss_probability_exact(populations, L_loss: int, kd_tau_total: float) -> float:
    """``<A_L^dag A_L>`` for a state with the given Fock populations.

    Each excitation is lost independently with probability ``1 - exp(-kt)``.
    """
    lost = -math.expm1(-kd_tau_total)
    kept = math.exp(-kd_tau_total)
    if isinstance(populations, dict):
        items = populations.items()
    else:
        items = enumerate(populations)
    return math.fsum(
        float(w) * math.comb(k, L_loss) * lost**L_loss * kept ** (k - L_loss)
        for k, w in items
        if k >= L_loss
    )


# -- code parameters -----------------------------------------------------------


@dataclass(frozen=True)
class FockCode:
    L: int

    def approx_fidelity(self, N: int, delta: float, kd_tau: float) -> float:
        return 1 - approx_decay_leading(self.L, N, delta, kd_tau)


@dataclass(frozen=True)
class CatCode:
    L: int
    alpha: float
    truncation: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "truncation", _check_truncation(self.alpha, 2 * self.L, self.truncation))

    def approx_fidelity(self, N: int, delta: float, kd_tau: float) -> float:
        return approx_fidelity_cat(self.L, N, delta, kd_tau, self.alpha)

    def loss_moment(self, logical: int) -> float:
        """Exact ``L``-loss moment of logical state ``0`` (``|C^L>``) or ``1`` (``|C^{2L}>``)."""
        n = self.L if logical == 0 else 2 * self.L
        return cat_loss_moment(self.alpha, 2 * self.L, n, self.L, self.truncation)


@dataclass(frozen=True)
class BinomialCode:
    L: int
    M: int

    def approx_fidelity(self, N: int, delta: float, kd_tau: float) -> float:
        return approx_fidelity_binomial(self.L, self.M, N, delta, kd_tau)

    def loss_moment(self, logical: int) -> float:
        return float(binomial_loss_moment(self.L, self.M, logical, self.L))


CodeParams = Union[FockCode, CatCode, BinomialCode]
