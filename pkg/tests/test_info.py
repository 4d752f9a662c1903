import itertools
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DELTA, KD_TAU, KU_TAU
from robust_readout.classify import exact_infidelity
from robust_readout.hmm import (
    EmissionMatrix,
    HmmModel,
    OutcomeSequence,
    decay_model,
    heating_model,
    likelihood,
    multilevel_model,
)
from robust_readout.info import (
    binary_entropy,
    channel_distributions,
    conditional_entropy,
    fano_infidelity_bound,
    inverse_binary_entropy,
    mutual_information,
    prior_entropy,
)
from robust_readout.rates import StochasticMatrix


def _decimal_entropy(p):
    getcontext().prec = 40
    p = Decimal(p)
    q = 1 - p
    ln2 = Decimal(2).ln()
    return float(-(p * p.ln() + q * q.ln()) / ln2)


def test_binary_entropy_examples():
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.1) == pytest.approx(_decimal_entropy("0.1"), rel=1e-15)
    assert round(binary_entropy(0.1), 6) == 0.468996
    with pytest.raises(ValueError):
        binary_entropy(1.2)


def test_inverse_binary_entropy_examples():
    assert inverse_binary_entropy(0.0) == 0.0
    assert inverse_binary_entropy(1.0) == 0.5
    assert 2 * inverse_binary_entropy(0.468996) == pytest.approx(0.2, abs=1e-6)


@given(p=st.floats(1e-9, 0.5))
@settings(max_examples=100, deadline=None)
def test_inverse_round_trip(p):
    assert inverse_binary_entropy(binary_entropy(p)) == pytest.approx(p, abs=1e-10)


def test_prior_entropy_is_one_bit():
    assert prior_entropy() == 1.0


def test_perfect_channel_has_zero_conditional_entropy():
    model = heating_model(2, 0, 4, 0.0, 0.0, 0.0)
    assert conditional_entropy(model) == 0.0
    assert mutual_information(model) == 1.0
    assert fano_infidelity_bound(model) == 0.0


def test_useless_channel_has_one_bit():
    E = EmissionMatrix(np.full((3, 2), 0.5), 0.5, "two-level", 0)
    model = HmmModel(StochasticMatrix(np.eye(3), 1.0), E, 5)
    assert conditional_entropy(model) == pytest.approx(1.0, abs=1e-15)
    assert fano_infidelity_bound(model) == pytest.approx(1.0, abs=1e-10)


def test_conditional_entropy_against_direct_sum():
    model = multilevel_model(3, 1, 3, DELTA, KD_TAU, KU_TAU)
    h = 0.0
    for seq in itertools.product(range(model.alphabet), repeat=model.N):
        s = OutcomeSequence(seq, model.alphabet)
        lams = [likelihood(model, b, s) for b in model.hypotheses]
        total = sum(lams)
        h -= sum(0.5 * lam * np.log2(lam / total) for lam in lams if lam > 0)
    value = conditional_entropy(model)
    assert value == pytest.approx(h, rel=1e-12)
    assert 0 < value < 1


def test_conditional_entropy_decreases_with_N():
    values = [conditional_entropy(multilevel_model(3, 1, N, DELTA, KD_TAU, KU_TAU)) for N in range(1, 7)]
    assert all(b < a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize(
    "model",
    [
        decay_model(2, 6, DELTA, KD_TAU),
        heating_model(3, 1, 7, DELTA, KD_TAU, KU_TAU),
        multilevel_model(3, 1, 5, DELTA, KD_TAU, KU_TAU),
        multilevel_model(2, 0, 4, 0.2, 0.1, 0.05),
    ],
)
def test_fano_bound_below_mle(model):
    bound = fano_infidelity_bound(model)
    assert bound <= exact_infidelity(model, "mle").infidelity
    assert 0 <= mutual_information(model) <= 1


def test_channel_distributions_invariants():
    model = heating_model(2, 0, 5, 0.05, 0.02, 0.01)
    dist = channel_distributions(model)
    np.testing.assert_array_equal(dist.prior, [0.5, 0.5])
    assert dist.joint.shape == (2**5, 2)
    assert dist.joint.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(dist.joint.sum(axis=0), dist.prior, atol=1e-12)
    np.testing.assert_allclose(dist.posterior.sum(axis=1), 1.0, atol=1e-12)
    seq = OutcomeSequence.from_index(13, 5)
    assert dist.joint[13, 1] == pytest.approx(0.5 * likelihood(model, 2, seq), rel=1e-12)


def test_conditional_entropy_thread_independent():
    model = decay_model(2, 18, DELTA, KD_TAU)
    assert conditional_entropy(model, threads=1) == conditional_entropy(model, threads=6)
