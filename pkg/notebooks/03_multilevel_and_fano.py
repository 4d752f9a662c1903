# %% [markdown]
# A multi-level ancilla and the information bound
# ===============================================
#
# Here the ancilla resolves every level 0..L, wrong with probability delta
# (spread evenly over the other outcomes).  Majority vote needs a threshold,
# whereas maximum likelihood uses the whole record.  The conditional entropy
# of the initial level given the record sets a floor that no decision rule
# can beat.

# %%
from robust_readout import (
    conditional_entropy,
    exact_infidelity,
    fano_infidelity_bound,
    multilevel_model,
)

delta, kd_tau, ku_tau = 0.02, 0.01, 0.005

# %%
print(" N   majority(m=1)        mle       Fano    H(B|A)")
for N in range(1, 9):
    model = multilevel_model(3, 1, N, delta, kd_tau, ku_tau)
    maj = exact_infidelity(model, "majority").infidelity
    mle = exact_infidelity(model, "mle").infidelity
    print(f"{N:2d} {maj:15.3e} {mle:10.3e} {fano_infidelity_bound(model):10.3e} {conditional_entropy(model):9.4f}")

# %% [markdown]
# Majority vote is best at N = 3 and degrades after that.  The likelihood
# rule keeps improving until loss dominates.  The entropy bound stays below
# both without touching them.
