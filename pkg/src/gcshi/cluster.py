"""Density-based categorization (DBSCAN) with a naive neighbourhood scan.

No spatial index is used: every neighbourhood query scans all ``n`` points,
and every point is queried exactly once, so a run costs ``n**2`` distance
evaluations. ``ClusterAssignment.distance_evaluations`` records the count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Category, RatingMatrix

NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    epsilon: float
    min_pts: int

    def __post_init__(self):
        if not (self.epsilon >= 0):
            raise ValueError("epsilon must be ≥ 0")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise ValueError("min_pts must be a positive integer")


@dataclass(frozen=True)
class ClusterAssignment:
    clusters: tuple[Category, ...]
    noise: frozenset[str]
    params: DbscanParams
    core: frozenset[str] = frozenset()
    distance_evaluations: int = 0

    def cluster_of(self, code: str) -> str | None:
        for c in self.clusters:
            if code in c.members:
                return c.code
        return None

    def __len__(self):
        return len(self.clusters)


def distance(p: Sequence[float], q: Sequence[float]) -> float:
    """Euclidean distance between two rating vectors of equal length."""
    if len(p) != len(q):
        raise ValueError(f"dimension mismatch: {len(p)} vs {len(q)}")
    if len(p) == 0:
        raise ValueError("vectors must have at least one component")
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))


class _Scanner:
    """Naive epsilon-neighbourhood queries with an evaluation counter."""

    def __init__(self, points: np.ndarray, epsilon: float):
        self.points = [tuple(float(x) for x in row) for row in points]
        self.epsilon = epsilon
        self.evaluations = 0

    def query(self, i: int) -> list[int]:
        p = self.points[i]
        out = []
        for j, q in enumerate(self.points):
            self.evaluations += 1
            if distance(p, q) <= self.epsilon:
                out.append(j)
        return out


def _as_points(matrix) -> np.ndarray:
    values = matrix.values if isinstance(matrix, RatingMatrix) else matrix
    points = np.asarray(values, dtype=float)
    if points.size == 0:
        return points.reshape(0, points.shape[1] if points.ndim == 2 else 0)
    if points.ndim != 2:
        raise ValueError("points must form a 2-D array")
    return points


def epsilon_neighborhood(point_index: int, matrix, params: DbscanParams) -> frozenset[int]:
    """Indices of all points within ``params.epsilon`` of the given point, itself included."""
    points = _as_points(matrix)
    if not 0 <= point_index < len(points):
        raise IndexError(f"point index {point_index} out of range for {len(points)} points")
    return frozenset(_Scanner(points, params.epsilon).query(point_index))


def dbscan_labels(points, params: DbscanParams) -> tuple[np.ndarray, np.ndarray, int]:
    """Label each row of ``points`` with a cluster id (0, 1, ...) or ``NOISE``.

    Returns ``(labels, core_mask, distance_evaluations)``. Cluster ids follow
    first-discovery order over the rows; a border point reachable from two
    clusters stays with the one that reached it first.
    """
    points = _as_points(points)
    n = len(points)
    labels = np.full(n, NOISE, dtype=int)
    core = np.zeros(n, dtype=bool)
    if n == 0:
        return labels, core, 0

    scanner = _Scanner(points, params.epsilon)
    visited = np.zeros(n, dtype=bool)
    cluster_id = -1

    for i in range(n):
        if visited[i]:
            continue
        visited[i] = True
        neighbors = scanner.query(i)
        if len(neighbors) < params.min_pts:
            continue  # noise for now; may become a border point later
        core[i] = True
        cluster_id += 1
        labels[i] = cluster_id

        seeds = list(neighbors)
        queued = set(seeds)
        k = 0
        while k < len(seeds):
            j = seeds[k]
            k += 1
            if labels[j] == NOISE:
                labels[j] = cluster_id
            if visited[j]:
                continue
            visited[j] = True
            reach = scanner.query(j)
            if len(reach) >= params.min_pts:
                core[j] = True
                for q in reach:
                    if q not in queued:
                        queued.add(q)
                        seeds.append(q)

    return labels, core, scanner.evaluations


def dbscan(matrix: RatingMatrix, params: DbscanParams) -> ClusterAssignment:
    """Categorize the activities of ``matrix``; clusters are coded C1, C2, ..."""
    labels, core, evaluations = dbscan_labels(matrix, params)
    rows = matrix.rows
    n_clusters = int(labels.max()) + 1 if len(labels) else 0
    clusters = tuple(
        Category(
            code=f"C{k + 1}",
            name=f"C{k + 1}",
            members=frozenset(rows[i] for i in np.flatnonzero(labels == k)),
        )
        for k in range(n_clusters)
    )
    return ClusterAssignment(
        clusters=clusters,
        noise=frozenset(rows[i] for i in np.flatnonzero(labels == NOISE)),
        params=params,
        core=frozenset(rows[i] for i in np.flatnonzero(core)),
        distance_evaluations=evaluations,
    )


def cluster_profiles(assignment: ClusterAssignment, matrix: RatingMatrix) -> dict[str, np.ndarray]:
    """Mean rating per criterion for each cluster, keyed by cluster code."""
    index = {code: i for i, code in enumerate(matrix.rows)}
    values = np.asarray(matrix.values, dtype=float)
    profiles = {}
    for cat in assignment.clusters:
        rows = sorted(index[m] for m in cat.members)
        profiles[cat.code] = values[rows].mean(axis=0)
    return profiles


def rename_clusters(assignment: ClusterAssignment, names: dict[str, str]) -> ClusterAssignment:
    """Attach descriptive names to clusters by code; unknown codes keep theirs."""
    clusters = tuple(Category(c.code, names.get(c.code, c.name), c.members) for c in assignment.clusters)
    return ClusterAssignment(clusters, assignment.noise, assignment.params, assignment.core, assignment.distance_evaluations)
