# %% [markdown]
# How stable is the ranking under weight perturbation?
#
# Weights are resampled uniformly from the simplex within an L1 ball around
# the base weights; each sample is ranked again.

# %%
from gcshi import bundled_paper_catalog
from gcshi.pipeline import sensitivity

decision = bundled_paper_catalog().decision
base = (0.11, 0.63, 0.26)

# %%
for radius in (0.05, 0.1, 0.3):
    rep = sensitivity(decision, base, radius=radius, samples=2000, seed=7)
    top = {k: round(v, 3) for k, v in rep.top_rank_frequency.items() if v}
    print(f"radius {radius}: top-rank {top}")

# %%
rep = sensitivity(decision, base, radius=0.3, samples=2000, seed=7)
flips = sorted(rep.reversal_frequency.items(), key=lambda kv: -kv[1])[:5]
for (above, below), f in flips:
    print(f"{above} above {below} in base order, reversed in {f:.1%} of samples")
