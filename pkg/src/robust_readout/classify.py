"""Level-2 decisions from N level-1 readouts, and their exact and sampled error rates."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from .enumeration import Block, map_blocks
from .hmm import HmmModel, OutcomeSequence, likelihood

__all__ = [
    "ClassificationDecision",
    "InfidelityReport",
    "STRATEGIES",
    "RNG_ALGORITHM",
    "majority_vote",
    "mle_classify",
    "exact_infidelity",
    "monte_carlo_infidelity",
    "optimal_over_N",
]

STRATEGIES = ("majority", "mle")

#: Recorded in every Monte Carlo report so results can be replayed elsewhere.
RNG_ALGORITHM = "numpy.random.Philox(4x64-10)/SeedSequence"

_MC_CHUNK = 2**16


@dataclass(frozen=True)
class ClassificationDecision:
    decided: int
    tie: bool = False


@dataclass(frozen=True)
class InfidelityReport:
    """Conditional error probabilities of a level-2 readout.

    For Monte Carlo reports ``stderr`` is the binomial standard error of the
    infidelity; the per-hypothesis errors are in ``stderr_0_given_L`` and
    ``stderr_L_given_0``.
    """

    p_0_given_L: float
    p_L_given_0: float
    method: str
    N: int
    L: int
    m: int = 0
    delta: float = 0.0
    kappa_down_tau: float = 0.0
    kappa_up_tau: float = 0.0
    stderr: Optional[float] = None
    stderr_0_given_L: Optional[float] = None
    stderr_L_given_0: Optional[float] = None
    trials: Optional[int] = None
    rng: Optional[str] = None

    @property
    def infidelity(self) -> float:
        return self.p_0_given_L + self.p_L_given_0

    @property
    def fidelity(self) -> float:
        return 1.0 - self.p_0_given_L - self.p_L_given_0


def _check_strategy(strategy: str) -> None:
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")


def majority_vote(seq: OutcomeSequence, m: int = 0, L: Optional[int] = None) -> ClassificationDecision:
    """Tally votes for ``|L>``; exact ties go to ``|L>`` and are flagged.

    For a binary alphabet the vote for ``|L>`` is the symbol ``e`` (1); for
    an (L+1)-ary alphabet it is any symbol above ``m``.  ``L`` defaults to
    ``alphabet - 1``.
    """
    symbols = seq.symbols
    if not symbols:
        raise ValueError("cannot vote on an empty sequence")
    threshold = 0 if seq.alphabet == 2 else m
    N = len(symbols)
    count = sum(1 for a in symbols if a > threshold)
    tie = N % 2 == 0 and 2 * count == N
    if L is None:
        L = seq.alphabet - 1
    return ClassificationDecision(L if count >= (N + 1) // 2 else 0, tie)


def mle_classify(model: HmmModel, seq: OutcomeSequence) -> ClassificationDecision:
    """Pick the initial level with the larger likelihood; exact ties decide ``0``."""
    lam0 = likelihood(model, 0, seq)
    lamL = likelihood(model, model.L, seq)
    return ClassificationDecision(model.L if lamL > lam0 else 0, lamL == lam0)


def _decides_L(model: HmmModel, strategy: str, votes, lam0, lamL):
    if strategy == "majority":
        return votes >= (model.N + 1) // 2
    return lamL > lam0


def _report(model, method, p0L, pL0, **extra) -> InfidelityReport:
    return InfidelityReport(
        p_0_given_L=p0L,
        p_L_given_0=pL0,
        method=method,
        N=model.N,
        L=model.L,
        m=model.m,
        delta=model.delta,
        kappa_down_tau=model.kd_tau,
        kappa_up_tau=model.ku_tau,
        **extra,
    )


def exact_infidelity(
    model: HmmModel,
    strategy: str = "majority",
    threads: int = 1,
    budget: Optional[int] = None,
) -> InfidelityReport:
    """Sum the likelihood of every misclassified readout record.

    Cost is ``O(alphabet**N)``; raises
    :class:`~robust_readout.enumeration.BudgetExceededError` beyond the budget.
    """
    _check_strategy(strategy)

    def tally(block: Block):
        to_L = _decides_L(model, strategy, block.votes, block.lam0, block.lamL)
        return float(block.lamL[~to_L].sum()), float(block.lam0[to_L].sum())

    parts = map_blocks(model, tally, threads=threads, budget=budget)
    p0L = math.fsum(p[0] for p in parts)
    pL0 = math.fsum(p[1] for p in parts)
    return _report(model, f"exact-{strategy}", p0L, pL0)


def _sample_chunk(model: HmmModel, start: int, size: int, rng: np.random.Generator):
    T_cum = np.cumsum(model.T.entries, axis=1)
    T_cum[:, -1] = 1.0
    E_cum = np.cumsum(model.E.entries, axis=1)
    E_cum[:, -1] = 1.0
    level = np.full(size, start)
    symbols = np.empty((size, model.N), dtype=np.int64)
    for n in range(model.N):
        u = rng.random(size)
        level = (u[:, None] >= T_cum[level]).sum(axis=1)
        v = rng.random(size)
        symbols[:, n] = (v[:, None] >= E_cum[level]).sum(axis=1)
    return symbols


def _batch_likelihood(model: HmmModel, start: int, symbols: np.ndarray) -> np.ndarray:
    T, E = model.T.entries, model.E.entries
    alpha = np.zeros((symbols.shape[0], model.L + 1))
    alpha[:, start] = 1.0
    for n in range(model.N):
        alpha = (alpha @ T) * E[:, symbols[:, n]].T
    return alpha.sum(axis=1)


def monte_carlo_infidelity(
    model: HmmModel,
    strategy: str = "majority",
    trials: int = 100_000,
    seed: Union[int, Sequence[int]] = 0,
    threads: int = 1,
) -> InfidelityReport:
    """Estimate the conditional error rates by sampling hidden paths and readouts.

    ``trials`` records are drawn per hypothesis.  Chunk ``k`` of hypothesis
    ``h`` draws from ``Philox`` seeded with ``SeedSequence([seed, h, k])``,
    so the estimate is reproducible and independent of ``threads``.  A
    sequence ``seed`` is spliced in front of ``h, k`` unchanged.
    """
    _check_strategy(strategy)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    entropy = [int(s) for s in seed] if isinstance(seed, (tuple, list)) else [int(seed)]
    chunks = [(lo, min(lo + _MC_CHUNK, trials)) for lo in range(0, trials, _MC_CHUNK)]

    def run(task):
        h, k, (lo, hi) = task
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([*entropy, h, k])))
        start = model.hypotheses[h]
        symbols = _sample_chunk(model, start, hi - lo, rng)
        votes = (symbols > model.vote_threshold).sum(axis=1)
        if strategy == "mle":
            to_L = _batch_likelihood(model, model.L, symbols) > _batch_likelihood(model, 0, symbols)
        else:
            to_L = votes >= (model.N + 1) // 2
        # errors: hypothesis 0 decided L, hypothesis L decided 0
        return int(to_L.sum()) if h == 0 else int((~to_L).sum())

    tasks = [(h, k, c) for h in (0, 1) for k, c in enumerate(chunks)]
    if threads <= 1:
        counts = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(run, tasks))
    n_chunks = len(chunks)
    errors_0 = sum(counts[:n_chunks])
    errors_L = sum(counts[n_chunks:])
    pL0 = errors_0 / trials
    p0L = errors_L / trials
    se_L0 = math.sqrt(pL0 * (1 - pL0) / trials)
    se_0L = math.sqrt(p0L * (1 - p0L) / trials)
    return _report(
        model,
        "monte-carlo",
        p0L,
        pL0,
        stderr=math.hypot(se_0L, se_L0),
        stderr_0_given_L=se_0L,
        stderr_L_given_0=se_L0,
        trials=trials,
        rng=RNG_ALGORITHM,
    )


def optimal_over_N(
    model_for_N: Callable[[int], HmmModel],
    strategy: str = "majority",
    N_max: int = 15,
    N_min: int = 1,
    **kwargs,
) -> Tuple[int, InfidelityReport]:
    """Minimise the exact infidelity over ``N`` in ``N_min..N_max``; smallest ``N`` wins ties."""
    best = None
    for N in range(N_min, N_max + 1):
        report = exact_infidelity(model_for_N(N), strategy, **kwargs)
        if best is None or report.infidelity < best[1].infidelity:
            best = (N, report)
    return best
