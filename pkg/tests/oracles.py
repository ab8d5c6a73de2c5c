"""Independent reference implementations used to check the engines.

They share no code with ``gcshi`` and favour obviousness over speed.
"""

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


def dbscan_core_partition(points, epsilon, min_pts):
    """Core mask and the partition of core points into density-connected groups."""
    x = np.asarray(points, dtype=float)
    n = len(x)
    if n == 0:
        return np.zeros(0, bool), set()
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
    within = d <= epsilon
    core = within.sum(1) >= min_pts
    idx = np.flatnonzero(core)
    adjacency = within[np.ix_(idx, idx)]
    _, comp = connected_components(csr_matrix(adjacency), directed=False)
    groups = {}
    for i, c in zip(idx, comp):
        groups.setdefault(c, set()).add(int(i))
    return core, {frozenset(g) for g in groups.values()}


def topsis_straight_line(x, w, benefit):
    """Plain-Python vector-normalized TOPSIS: returns (r, t, best, worst, d_b, d_w, s)."""
    m, n = len(x), len(x[0])
    norms = [math.sqrt(sum(x[i][j] ** 2 for i in range(m))) for j in range(n)]
    r = [[x[i][j] / norms[j] if norms[j] else 0.0 for j in range(n)] for i in range(m)]
    t = [[r[i][j] * w[j] for j in range(n)] for i in range(m)]
    col = [[t[i][j] for i in range(m)] for j in range(n)]
    best = [max(col[j]) if benefit[j] else min(col[j]) for j in range(n)]
    worst = [min(col[j]) if benefit[j] else max(col[j]) for j in range(n)]
    db = [math.sqrt(sum((t[i][j] - best[j]) ** 2 for j in range(n))) for i in range(m)]
    dw = [math.sqrt(sum((t[i][j] - worst[j]) ** 2 for j in range(n))) for i in range(m)]
    s = [dw[i] / (dw[i] + db[i]) if dw[i] + db[i] else 0.5 for i in range(m)]
    return r, t, best, worst, db, dw, s


def ahp_eigen(a):
    """Principal eigenvalue and sum-normalized eigenvector via LAPACK."""
    vals, vecs = np.linalg.eig(np.asarray(a, dtype=float))
    k = int(np.argmax(vals.real))
    v = np.abs(vecs[:, k].real)
    return float(vals[k].real), v / v.sum()
