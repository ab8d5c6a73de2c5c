# %% [markdown]
# Categorizing security activities by density
#
# Twenty activities, each rated 1-10 by experts on three criteria. DBSCAN
# groups activities with identical or near-identical profiles.

# %%
import numpy as np

from gcshi import DbscanParams, bundled_paper_catalog, cluster_profiles, dbscan

catalog = bundled_paper_catalog()
ratings = catalog.ratings
print(ratings.columns)
print(np.asarray(ratings.values)[:5])

# %%
assignment = dbscan(ratings, DbscanParams(epsilon=0.5, min_pts=2))
for c in assignment.clusters:
    print(c.code, sorted(c.members, key=lambda s: int(s[1:])))
print("noise:", sorted(assignment.noise))
print("distance evaluations:", assignment.distance_evaluations)  # always n^2

# %%
# Mean rating profile of each category.
for code, mean in cluster_profiles(assignment, ratings).items():
    print(code, mean)

# %%
# A wider radius merges categories whose profiles differ by one point.
wide = dbscan(ratings, DbscanParams(epsilon=1.0, min_pts=2))
print(len(wide.clusters), "clusters at eps=1.0")
