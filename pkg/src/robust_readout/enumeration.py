"""Exhaustive enumeration of readout records, shared by classification and entropy.

Every sequence of ``N`` symbols has a canonical index in base ``alphabet``
with the first readout as the most significant digit.  Sequences are split
into a prefix of length ``N // 2`` and a suffix of the remaining length.
Forward vectors over all prefixes and backward vectors over all suffixes are
tabulated once; the likelihood of a full record is their dot product.

The index space is cut into blocks of whole prefixes.  The block layout
depends only on the model, never on the number of worker threads, and block
results are always returned in index order, so reductions built on top are
independent of the thread count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, TypeVar

import numpy as np

from .hmm import HmmModel

__all__ = ["ENUMERATION_BUDGET", "BudgetExceededError", "Block", "check_budget", "map_blocks"]

#: Largest number of sequences enumerated without an explicit override.
ENUMERATION_BUDGET = 2**24

# target number of sequences per block
_BLOCK_TARGET = 2**16

R = TypeVar("R")


class BudgetExceededError(ValueError):
    """Raised when ``alphabet**N`` exceeds the enumeration budget."""


@dataclass(frozen=True, eq=False)
class Block:
    """A contiguous run of sequence indices with both hypotheses' likelihoods.

    ``lam0[k]`` and ``lamL[k]`` belong to sequence index ``start + k``;
    ``votes[k]`` counts readouts above the model's vote threshold.
    """

    start: int
    lam0: np.ndarray
    lamL: np.ndarray
    votes: np.ndarray


def check_budget(model: HmmModel, budget: Optional[int] = None) -> int:
    """Return the number of sequences, raising if it exceeds ``budget``."""
    limit = ENUMERATION_BUDGET if budget is None else budget
    count = model.alphabet**model.N
    if count > limit:
        if model.alphabet == 2:
            max_N = limit.bit_length() - 1
            detail = f"binary alphabet requires N <= {max_N}"
        else:
            detail = f"requires alphabet**N <= {limit}"
        raise BudgetExceededError(
            f"enumeration of {model.alphabet}**{model.N} = {count} sequences exceeds "
            f"the budget of {limit} ({detail})"
        )
    return count


def _prefix_forward(T, E, starts, length):
    # starts: (H, dim) -> (H, A**length, dim)
    F = starts[:, None, :]
    for _ in range(length):
        moved = F @ T
        F = (moved[:, :, None, :] * E.T[None, None, :, :]).reshape(F.shape[0], -1, T.shape[0])
    return F


def _suffix_backward(T, E, length):
    # b[s, j] = P(suffix s | level j before the first suffix transition)
    dim, A = E.shape
    B = np.ones((1, dim))
    for _ in range(length):
        stacked = [(T @ (E[:, a][None, :] * B).T).T for a in range(A)]
        B = np.concatenate(stacked, axis=0)
    return B


def _vote_counts(A, length, threshold):
    idx = np.arange(A**length)
    votes = np.zeros(A**length, dtype=np.int64)
    for _ in range(length):
        idx, digit = np.divmod(idx, A)
        votes += digit > threshold
    return votes


def map_blocks(
    model: HmmModel,
    fn: Callable[[Block], R],
    threads: int = 1,
    budget: Optional[int] = None,
) -> List[R]:
    """Apply ``fn`` to every block of the sequence space; results in index order."""
    check_budget(model, budget)
    model.check_underflow()
    T = model.T.entries
    E = model.E.entries
    A, N, L = model.alphabet, model.N, model.L
    p = N // 2
    s = N - p

    starts = np.zeros((2, L + 1))
    starts[0, 0] = 1.0
    starts[1, L] = 1.0
    F = _prefix_forward(T, E, starts, p)
    Bk = _suffix_backward(T, E, s)
    pre_votes = _vote_counts(A, p, model.vote_threshold)
    suf_votes = _vote_counts(A, s, model.vote_threshold)

    n_suffix = A**s
    per_block = max(1, _BLOCK_TARGET // n_suffix)
    n_prefix = A**p
    bounds = [(lo, min(lo + per_block, n_prefix)) for lo in range(0, n_prefix, per_block)]

    def run(bound):
        lo, hi = bound
        lam = np.zeros((2, hi - lo, n_suffix))
        # fixed summation order over levels keeps every entry bit-stable
        for j in range(L + 1):
            lam += F[:, lo:hi, j, None] * Bk[None, None, :, j]
        votes = pre_votes[lo:hi, None] + suf_votes[None, :]
        block = Block(lo * n_suffix, lam[0].ravel(), lam[1].ravel(), votes.ravel())
        return fn(block)

    if threads <= 1 or len(bounds) == 1:
        return [run(b) for b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, bounds))
