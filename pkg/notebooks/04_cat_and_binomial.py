# %% [markdown]
# Cat and binomial codewords
# ==========================
#
# Rotation-symmetric codes spread each codeword over many Fock levels.  A
# readout error needs L losses, and the chance of that scales with the
# falling-factorial moment <a^dag^L a^L>.  Closed forms replace it with
# |alpha|^(2L) (cat) or (LM/2)^L (binomial); the exact moments show how
# good that is.

# %%
import numpy as np

from robust_readout import BinomialCode, CatCode
from robust_readout.encodings import binomial_loss_moment, binomial_moment_power, cat_codeword

# %%
a, b = cat_codeword(2.0, 4, 2), cat_codeword(2.0, 4, 4)
print("cat L=2, alpha=2: norms", a @ a, b @ b, "overlap", a @ b)

for alpha in (1.0, 2.0, 3.0, 5.0):
    code = CatCode(2, alpha)
    exact = 0.5 * (code.loss_moment(0) + code.loss_moment(1))
    print(f"alpha={alpha}: exact moment {exact:10.4f}  vs |alpha|^4 = {alpha**4:10.4f}")

# %%
for M in (2, 4, 8, 16, 32):
    exact = np.mean([float(binomial_loss_moment(3, M, p, 3)) for p in (0, 1)])
    print(f"binomial L=3, M={M:2d}: exact / (LM/2)^L = {exact / binomial_moment_power(3, M):.4f}")

# %%
for code in (CatCode(2, np.sqrt(2)), BinomialCode(2, 2)):
    print(code, "fidelity at N=3:", code.approx_fidelity(3, 0.02, 0.01))
