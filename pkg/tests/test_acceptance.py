"""Acceptance criteria 1-8, one test each.

Every test records a ``PASS``/``FAIL`` line before asserting; the lines are
printed as they are produced and again in the pytest terminal summary.
"""
import itertools
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from conftest import ACCEPTANCE_LINES, DELTA, KD_TAU, KU_TAU, brute_force_likelihood
from robust_readout.approx import approx_decay_leading, approx_fidelity_binomial, approx_fidelity_cat
from robust_readout.classify import exact_infidelity, monte_carlo_infidelity
from robust_readout.encodings import (
    binomial_loss_moment,
    binomial_mean_photon,
    binomial_moment_power,
    cat_codeword,
    cat_loss_moment,
    cat_moment_power,
)
from robust_readout.hmm import OutcomeSequence, decay_model, heating_model, likelihood, multilevel_model
from robust_readout.info import binary_entropy, fano_infidelity_bound, inverse_binary_entropy, prior_entropy
from robust_readout.rates import decay_generator, decay_transition_closed_form, heating_generator, transition_matrix


def record(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _min_over_N(make, strategy, Ns):
    values = {N: exact_infidelity(make(N), strategy).infidelity for N in Ns}
    N = min(values, key=values.get)
    return N, values[N]


def test_criterion_1_fig3_order_of_magnitude():
    start = time.perf_counter()
    best = {}
    for strategy in ("majority", "mle"):
        for L in (1, 2):
            best[strategy, L] = _min_over_N(lambda N: decay_model(L, N, DELTA, KD_TAU), strategy, range(1, 16))
    elapsed = time.perf_counter() - start
    ratios = {s: best[s, 1][1] / best[s, 2][1] for s in ("majority", "mle")}
    ok = all(r >= 10 for r in ratios.values()) and elapsed < 60
    detail = ", ".join(f"{s} L1/L2 = {r:.1f}x" for s, r in ratios.items())
    assert record(1, ok, f"{detail}; {elapsed:.2f} s")


def test_criterion_2_leading_order_converges():
    cases = [(1, 1), (1, 3), (1, 5), (2, 3), (2, 5), (2, 7), (3, 5)]
    worst = 0.0
    ok = True
    for L, N in cases:
        gaps = []
        for s in (1, 2, 4, 8):
            d, k = DELTA / s, KD_TAU / s
            exact = exact_infidelity(decay_model(L, N, d, k), "majority").infidelity
            gaps.append(abs(approx_decay_leading(L, N, d, k) / exact - 1))
        ok &= all(b < a for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 0.1
        worst = max(worst, gaps[-1])
    assert record(2, ok, f"gap shrinks on every halving for {len(cases)} (L, N) cases; worst final |ratio-1| = {worst:.2e}")


def test_criterion_3_fig5_threshold():
    start = time.perf_counter()
    best_m = {}
    for L in (1, 2, 3):
        per_m = {
            m: _min_over_N(lambda N: heating_model(L, m, N, DELTA, KD_TAU, KU_TAU), "majority", range(1, 16))[1]
            for m in range(L)
        }
        best_m[L] = min(per_m, key=per_m.get)
    elapsed = time.perf_counter() - start
    ok = best_m == {1: 0, 2: 0, 3: 1} and elapsed < 300
    assert record(3, ok, f"optimal m by L = {best_m}; {elapsed:.2f} s")


def test_criterion_4_fig6_mle_and_fano():
    Ns = range(1, 11)
    mle = {N: exact_infidelity(multilevel_model(3, 1, N, DELTA, KD_TAU, KU_TAU), "mle").infidelity for N in Ns}
    majority = min(
        _min_over_N(lambda N: multilevel_model(3, m, N, DELTA, KD_TAU, KU_TAU), "majority", Ns)[1] for m in range(3)
    )
    bounds = {N: fano_infidelity_bound(multilevel_model(3, 1, N, DELTA, KD_TAU, KU_TAU)) for N in Ns}
    unsaturated = all(bounds[N] < mle[N] for N in Ns)
    ok = min(mle.values()) < majority and unsaturated
    assert record(
        4, ok,
        f"min MLE {min(mle.values()):.3e} < min majority {majority:.3e}; Fano bound strictly below MLE at N=1..10",
    )


def test_criterion_5_oracles():
    # (a) closed form vs matrix exponential
    dev_a = 0.0
    for L in range(1, 7):
        for kt in (1e-3, 0.01, 0.3, 2.0):
            T = transition_matrix(decay_generator(L, kt), 1.0).entries
            closed = np.array([[decay_transition_closed_form(i, j, kt) for j in range(L + 1)] for i in range(L + 1)])
            dev_a = max(dev_a, float(np.abs(T - closed).max()))

    # (b) forward vs brute-force path sums wherever (L+1)^N <= 1e5
    rng = np.random.default_rng(5)
    dev_b = 0.0
    instances = 0
    for L in range(1, 5):
        for N in itertools.count(1):
            if (L + 1) ** N > 10**5:
                break
            m = (L - 1) // 2
            for model in (heating_model(L, m, N, 0.1, 0.2, 0.1), multilevel_model(L, m, N, 0.1, 0.2, 0.1)):
                T, E = model.T.entries, model.E.entries
                total = model.alphabet**N
                idx = range(total) if total <= 32 else rng.choice(total, 8, replace=False)
                for i in idx:
                    seq = OutcomeSequence.from_index(int(i), N, model.alphabet)
                    for h in model.hypotheses:
                        ref = brute_force_likelihood(T, E, h, seq.symbols)
                        dev_b = max(dev_b, abs(likelihood(model, h, seq) / ref - 1))
                        instances += 1

    # (c) Monte Carlo vs exact on a 12-point grid
    grid = [
        (decay_model(1, 3, DELTA, KD_TAU), "majority"),
        (decay_model(2, 5, DELTA, KD_TAU), "majority"),
        (decay_model(2, 9, DELTA, KD_TAU), "mle"),
        (decay_model(3, 4, 0.05, 0.02), "mle"),
        (heating_model(2, 0, 3, DELTA, KD_TAU, KU_TAU), "majority"),
        (heating_model(3, 1, 7, DELTA, KD_TAU, KU_TAU), "majority"),
        (heating_model(3, 1, 5, DELTA, KD_TAU, KU_TAU), "mle"),
        (heating_model(2, 1, 6, 0.05, 0.03, 0.02), "mle"),
        (multilevel_model(3, 1, 5, DELTA, KD_TAU, KU_TAU), "majority"),
        (multilevel_model(3, 0, 4, DELTA, KD_TAU, KU_TAU), "mle"),
        (multilevel_model(2, 0, 6, 0.05, 0.02, 0.01), "majority"),
        (multilevel_model(3, 2, 3, 0.05, 0.02, 0.01), "mle"),
    ]
    worst_z = 0.0
    for i, (model, strategy) in enumerate(grid):
        exact = exact_infidelity(model, strategy)
        mc = monte_carlo_infidelity(model, strategy, trials=10**6, seed=(2024, i), threads=4)
        worst_z = max(worst_z, abs(mc.infidelity - exact.infidelity) / mc.stderr)

    ok = dev_a < 1e-10 and dev_b < 1e-12 and worst_z < 5
    assert record(
        5, ok,
        f"(a) max dev {dev_a:.1e}; (b) max rel dev {dev_b:.1e} over {instances} likelihoods; "
        f"(c) worst |z| {worst_z:.2f} over {len(grid)} points",
    )


def test_criterion_6_invariants():
    failures = []
    for L in (1, 3, 6):
        gen = decay_generator(L, 1.0) + heating_generator(L, 0.3)
        for tau in np.logspace(-4, 1, 6):
            T1 = transition_matrix(gen, tau).entries
            if np.abs(T1.sum(axis=1) - 1).max() > 1e-12:
                failures.append(f"stochastic L={L} tau={tau:.1e}")
            T2 = transition_matrix(gen, 2 * tau).entries
            if np.abs(T1 @ T1 - T2).max() > 1e-10:
                failures.append(f"semigroup L={L} tau={tau:.1e}")

    for model in (decay_model(2, 6, 0.05, 0.02), heating_model(3, 1, 5, 0.05, 0.02, 0.01),
                  multilevel_model(2, 0, 4, 0.1, 0.05, 0.02)):
        for h in model.hypotheses:
            total = math.fsum(likelihood(model, h, s) for s in itertools.product(range(model.alphabet), repeat=model.N))
            if abs(total - 1) > 1e-10:
                failures.append(f"normalisation {model.kind} h={h}")

    grid = [decay_model(1, 5, 0.05, 0.02), decay_model(2, 8, DELTA, KD_TAU),
            heating_model(3, 1, 7, DELTA, KD_TAU, KU_TAU), heating_model(2, 0, 6, 0.1, 0.03, 0.02),
            multilevel_model(3, 1, 5, DELTA, KD_TAU, KU_TAU), multilevel_model(2, 0, 6, 0.1, 0.05, 0.01)]
    for model in grid:
        if exact_infidelity(model, "mle").infidelity > exact_infidelity(model, "majority").infidelity + 1e-15:
            failures.append(f"mle > majority {model.kind} L={model.L} N={model.N}")

    if prior_entropy() != 1.0:
        failures.append("H(B) != 1")
    for p in np.linspace(1e-6, 0.5, 101):
        if abs(inverse_binary_entropy(binary_entropy(p)) - p) > 1e-10:
            failures.append(f"entropy round trip p={p}")

    for L in (1, 2, 3):
        for alpha in (0.7, 1.5, 3.0):
            a, b = cat_codeword(alpha, 2 * L, L), cat_codeword(alpha, 2 * L, 2 * L)
            n = min(a.size, b.size)
            if abs(a @ a - 1) > 1e-12 or abs(b @ b - 1) > 1e-12 or abs(a[:n] @ b[:n]) > 1e-12:
                failures.append(f"cat L={L} alpha={alpha}")

    for L in range(1, 9):
        for M in range(1, 9):
            if abs(sum(binomial_mean_photon(L, M)) / 2 - L * M / 2) > 1e-12:
                failures.append(f"binomial mean L={L} M={M}")

    assert record(6, not failures, "all invariant suites hold" if not failures else "; ".join(failures[:5]))


def test_criterion_7_cli_determinism(tmp_path):
    outputs = []
    for threads in ("1", "8"):
        out = tmp_path / f"fig3_{threads}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "robust_readout", "reproduce", "fig3", "--seed", "7",
             "--threads", threads, "--output", str(out)],
            capture_output=True, check=False,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    assert record(7, ok, f"fig3 CSV with 1 and 8 threads byte-identical ({len(outputs[0])} bytes)")


def _frac_cat(L, N, delta, kd_tau, nbar):
    h = math.ceil(N / 2)
    tail = 2 * math.comb(N, h) * delta**h
    return 1 - tail - Fraction(2, math.factorial(L)) * (nbar * h * kd_tau) ** L


def test_criterion_8_cat_and_binomial():
    F = Fraction
    hand = [
        # L=2, |alpha|^2=2, N=3, kd=0.01, delta=0.02 -> 1 - 0.0024 - 0.0016
        (approx_fidelity_cat(2, 3, 0.02, 0.01, math.sqrt(2)), F(1) - F(24, 10**4) - F(16, 10**4)),
        # binomial M=2, L=1, N=1, delta=0 -> 0.98
        (approx_fidelity_binomial(1, 2, 1, 0.0, 0.01), F(98, 100)),
        # binomial L=1, M=1, N=3, delta=0 -> 1 - 2 * (2 * 0.01 / 2)
        (approx_fidelity_binomial(1, 1, 3, 0.0, 0.01), F(98, 100)),
        # cat L=1, alpha=1.5, N=3, delta=0 -> 1 - 2 * 2.25 * 2 * 0.01
        (approx_fidelity_cat(1, 3, 0.0, 0.01, 1.5), _frac_cat(1, 3, F(0), F(1, 100), F(9, 4))),
    ]
    dev = max(abs(value - float(ref)) for value, ref in hand)

    cat_ratios = [cat_loss_moment(a, 4, 2, 2) / cat_moment_power(a, 2) for a in (2.0, 3.0, 5.0, 8.0)]
    cat_gaps = [abs(r - 1) for r in cat_ratios]
    bin_ratios = [float(binomial_loss_moment(3, M, 0, 3)) / binomial_moment_power(3, M) for M in (4, 6, 10, 40)]
    bin_gaps = [abs(r - 1) for r in bin_ratios]
    converging = all(b < a for a, b in zip(cat_gaps, cat_gaps[1:])) and all(
        b < a for a, b in zip(bin_gaps, bin_gaps[1:])
    )
    ok = dev < 1e-14 and converging and cat_gaps[-1] < 1e-10 and bin_gaps[-1] < 0.03
    assert record(
        8, ok,
        f"hand values max dev {dev:.1e}; cat moment gap {cat_gaps[0]:.1e} -> {cat_gaps[-1]:.1e}; "
        f"binomial moment gap {bin_gaps[0]:.1e} -> {bin_gaps[-1]:.1e}",
    )
