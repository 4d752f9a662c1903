"""Fidelity of repeated QND readout of bosonic qubits.

Exact hidden-Markov-model enumeration, majority-vote and maximum-likelihood
classification, Monte Carlo cross-checks, closed-form approximations and
information-theoretic bounds.
"""
from .approx import (
    ApproxInputs,
    approx_decay_full,
    approx_decay_leading,
    approx_fidelity_binomial,
    approx_fidelity_cat,
    approx_heating_full,
    approx_heating_leading,
    approx_multilevel_leading,
    validity_flags,
)
from .classify import (
    ClassificationDecision,
    InfidelityReport,
    exact_infidelity,
    majority_vote,
    mle_classify,
    monte_carlo_infidelity,
    optimal_over_N,
)
from .encodings import BinomialCode, CatCode, FockCode
from .enumeration import BudgetExceededError
from .hmm import (
    HmmModel,
    OutcomeSequence,
    decay_model,
    emission_multilevel,
    emission_two_level,
    heating_model,
    likelihood,
    multilevel_model,
)
from .info import (
    binary_entropy,
    conditional_entropy,
    fano_infidelity_bound,
    inverse_binary_entropy,
    mutual_information,
)
from .rates import (
    decay_generator,
    decay_transition_closed_form,
    expected_decay_time,
    heating_generator,
    transition_matrix,
)

__all__ = [
    "approx_decay_full",
    "approx_decay_leading",
    "approx_fidelity_binomial",
    "approx_fidelity_cat",
    "approx_heating_full",
    "approx_heating_leading",
    "approx_multilevel_leading",
    "ApproxInputs",
    "binary_entropy",
    "BinomialCode",
    "BudgetExceededError",
    "CatCode",
    "ClassificationDecision",
    "conditional_entropy",
    "decay_generator",
    "decay_model",
    "decay_transition_closed_form",
    "emission_multilevel",
    "emission_two_level",
    "exact_infidelity",
    "expected_decay_time",
    "fano_infidelity_bound",
    "FockCode",
    "heating_generator",
    "heating_model",
    "HmmModel",
    "InfidelityReport",
    "inverse_binary_entropy",
    "likelihood",
    "majority_vote",
    "mle_classify",
    "monte_carlo_infidelity",
    "multilevel_model",
    "mutual_information",
    "optimal_over_N",
    "OutcomeSequence",
    "transition_matrix",
    "validity_flags",
]

__version__ = "0.1.0"
