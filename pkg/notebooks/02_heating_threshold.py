# %% [markdown]
# Heating and the choice of threshold
# ===================================
#
# With thermal excitation as well as loss, |0> can climb upward.  The ancilla
# answers "is the cavity above level m?", so a higher threshold protects |0>
# but leaves |L> less room to decay.

# %%
from robust_readout import approx_heating_leading, heating_model, optimal_over_N

delta, kd_tau, ku_tau = 0.02, 0.01, 0.005

# %%
for L in (1, 2, 3):
    for m in range(L):
        N, rep = optimal_over_N(lambda N: heating_model(L, m, N, delta, kd_tau, ku_tau), "majority", 15)
        lead = approx_heating_leading(L, m, N, delta, kd_tau, ku_tau)
        print(f"L={L} m={m}: N*={N:2d}  exact {rep.infidelity:.4g}  leading-order {lead:.4g}")

# %% [markdown]
# For L = 1 and 2 the lowest threshold wins.  At L = 3 the heating path from
# |0> becomes the bottleneck at m = 0, and m = 1 is better by about a factor of four.
