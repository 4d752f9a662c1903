"""Entropies of the readout channel and the Fano lower bound on infidelity.

All logarithms are base 2.  The initial level is uniform over ``{0, L}``,
so its entropy is exactly one bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .enumeration import Block, map_blocks
from .hmm import HmmModel

__all__ = [
    "ChannelDistributions",
    "channel_distributions",
    "binary_entropy",
    "inverse_binary_entropy",
    "prior_entropy",
    "conditional_entropy",
    "mutual_information",
    "fano_infidelity_bound",
]


def binary_entropy(p: float) -> float:
    """``-p log2 p - (1-p) log2 (1-p)`` with ``0 log 0 = 0``."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    h = 0.0
    for q in (p, 1 - p):
        if q > 0:
            h -= q * math.log2(q)
    return h


def inverse_binary_entropy(h: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """The unique ``p`` in ``[0, 1/2]`` with ``binary_entropy(p) == h``, by bisection."""
    if h <= 0:
        return 0.0
    if h >= 1:
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def prior_entropy() -> float:
    return -sum(0.5 * math.log2(0.5) for _ in range(2))


@dataclass(frozen=True, eq=False)
class ChannelDistributions:
    """Joint, marginal and posterior distributions over records ``a`` and levels ``b``.

    Columns of ``joint`` and ``posterior`` are ordered ``(0, L)``; rows follow
    the canonical sequence index.
    """

    prior: np.ndarray
    joint: np.ndarray
    marginal: np.ndarray
    posterior: np.ndarray


def channel_distributions(model: HmmModel, budget: Optional[int] = None) -> ChannelDistributions:
    """Materialise every distribution; intended for small ``alphabet**N``."""
    blocks = map_blocks(model, lambda b: np.stack([b.lam0, b.lamL], axis=1), budget=budget)
    lam = np.concatenate(blocks, axis=0)
    joint = lam / 2
    marginal = joint.sum(axis=1)
    posterior = np.divide(joint, marginal[:, None], out=np.zeros_like(joint), where=marginal[:, None] > 0)
    return ChannelDistributions(np.array([0.5, 0.5]), joint, marginal, posterior)


def _entropy_block(block: Block) -> float:
    total = block.lam0 + block.lamL
    h = 0.0
    for lam in (block.lam0, block.lamL):
        keep = lam > 0
        h -= float(np.sum(0.5 * lam[keep] * np.log2(lam[keep] / total[keep])))
    return h


def conditional_entropy(model: HmmModel, threads: int = 1, budget: Optional[int] = None) -> float:
    """``H(B|A)`` in bits, by enumerating every readout record."""
    parts = map_blocks(model, _entropy_block, threads=threads, budget=budget)
    h = math.fsum(parts)
    # roundoff can push a perfect channel a hair below zero
    return min(max(h, 0.0), 1.0)


def mutual_information(model: HmmModel, threads: int = 1, budget: Optional[int] = None) -> float:
    return prior_entropy() - conditional_entropy(model, threads=threads, budget=budget)


def fano_infidelity_bound(model: HmmModel, threads: int = 1, budget: Optional[int] = None) -> float:
    """Smallest infidelity ``2 p_e`` compatible with ``H(B|A) <= H2(p_e)``."""
    return 2 * inverse_binary_entropy(conditional_entropy(model, threads=threads, budget=budget))
