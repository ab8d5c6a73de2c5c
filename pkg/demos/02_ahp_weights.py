# %% [markdown]
# Criterion weights from pairwise judgements

# %%
import numpy as np

from gcshi import PairwiseMatrix, derive_weights
from gcshi.io import bundled_path, load_weights

a = load_weights(bundled_path("pairwise.csv"))
print(a.criteria)
print(a.values)

# %%
w, report = derive_weights(a)
print("weights     ", np.round(w.weights, 4))
print("geo-mean    ", np.round(report.geometric_mean_weights, 4))
print("lambda_max  ", round(report.lambda_max, 4))
print("CR          ", round(report.consistency_ratio, 4), "acceptable" if report.acceptable else "inconsistent")

# %%
# A perfectly consistent matrix gives lambda_max = n and CR = 0.
consistent = PairwiseMatrix.from_weights(("E1", "E2", "E3"), [0.2, 0.5, 0.3])
w2, r2 = derive_weights(consistent)
print(w2.weights, r2.lambda_max, r2.consistency_ratio)

# %%
# Incoherent judgements: tolerated by default, rejected with strict=True.
bad = PairwiseMatrix(("E1", "E2", "E3"), [[1, 9, 1 / 9], [1 / 9, 1, 9], [9, 1 / 9, 1]])
_, r3 = derive_weights(bad)
print("CR =", round(r3.consistency_ratio, 3))
