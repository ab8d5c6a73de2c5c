# %% [markdown]
# Ranking categories by closeness to the ideal

# %%
import numpy as np

from gcshi import bundled_paper_catalog, rank

decision = bundled_paper_catalog().decision
print(decision.rows, decision.columns)
print(np.asarray(decision.values))

# %%
res = rank(decision, (0.11, 0.63, 0.26))
np.set_printoptions(precision=4, suppress=True)
print("weighted\n", res.weighted)
print("ideal     ", res.best)
print("anti-ideal", res.worst)
print("d+", res.dist_best)
print("d-", res.dist_worst)
print("closeness", res.closeness)
print(res.ranking_line())

# %%
# C1 sits on every anti-ideal coordinate, so its closeness is exactly zero.
print(res.closeness[0] == 0.0)

# %%
# Treating the second criterion as a cost flips the picture.
print(rank(decision, (0.11, 0.63, 0.26), ["benefit", "cost", "benefit"]).ranking_line())
