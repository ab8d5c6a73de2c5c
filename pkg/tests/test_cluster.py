import math

import numpy as np
import pytest

from gcshi.cluster import (
    DbscanParams,
    cluster_profiles,
    dbscan,
    dbscan_labels,
    distance,
    epsilon_neighborhood,
)
from gcshi.core import RatingMatrix, bundled_paper_catalog

PAPER = DbscanParams(0.5, 2)


@pytest.fixture(scope="module")
def ratings():
    return bundled_paper_catalog().ratings


def idx(ratings, *codes):
    return frozenset(ratings.rows.index(c) for c in codes)


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((0, 0, 0), (0, 0, 0), 0.0),
        ((1, 2, 3), (4, 6, 3), 5.0),
        ((5, 8, 9), (4, 4, 8), math.sqrt(18)),
    ],
)
def test_distance(p, q, expected):
    assert distance(p, q) == pytest.approx(expected, abs=1e-15)
    assert distance(q, p) == distance(p, q)


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        distance((1, 2), (1, 2, 3))


def test_params_validation():
    with pytest.raises(ValueError, match="epsilon must be ≥ 0"):
        DbscanParams(-1, 2)
    with pytest.raises(ValueError):
        DbscanParams(0.5, 0)


def test_neighborhoods(ratings):
    assert epsilon_neighborhood(ratings.rows.index("L5"), ratings, PAPER) == idx(ratings, "L5", "L18")
    assert epsilon_neighborhood(ratings.rows.index("L3"), ratings, PAPER) == idx(
        ratings, "L3", "L4", "L7", "L8", "L15"
    )


def test_zero_epsilon_neighborhood_is_identical_points(ratings):
    i = ratings.rows.index("L2")
    assert epsilon_neighborhood(i, ratings, DbscanParams(0, 2)) == idx(ratings, "L2", "L11", "L20")


def test_neighborhood_index_out_of_range(ratings):
    with pytest.raises(IndexError):
        epsilon_neighborhood(20, ratings, PAPER)


def test_single_point_is_noise():
    a = dbscan(RatingMatrix(["L1"], ["G1"], [[3]]), PAPER)
    assert a.clusters == () and a.noise == {"L1"}


def test_two_identical_points_form_cluster():
    a = dbscan(RatingMatrix(["L1", "L2"], ["G1"], [[3], [3]]), PAPER)
    assert [c.members for c in a.clusters] == [{"L1", "L2"}]
    assert not a.noise


def test_empty_matrix():
    labels, core, evals = dbscan_labels(np.zeros((0, 3)), PAPER)
    assert len(labels) == 0 and evals == 0


def test_paper_clusters_in_discovery_order(ratings):
    a = dbscan(ratings, PAPER)
    assert [sorted(c.members) for c in a.clusters] == [
        sorted(["L1", "L9", "L13", "L14", "L19"]),
        sorted(["L2", "L11", "L20"]),
        sorted(["L3", "L4", "L7", "L8", "L15"]),
        sorted(["L5", "L18"]),
        sorted(["L6", "L10", "L12", "L16", "L17"]),
    ]
    assert [c.code for c in a.clusters] == ["C1", "C2", "C3", "C4", "C5"]
    assert not a.noise


def test_profiles(ratings):
    a = dbscan(ratings, PAPER)
    p = cluster_profiles(a, ratings)
    assert tuple(p["C1"]) == (5, 8, 9)
    assert tuple(p["C5"]) == (5, 4, 8)


def test_profile_of_singleton_cluster():
    m = RatingMatrix(["a", "b"], ["G1", "G2"], [[2, 3], [9, 9]])
    a = dbscan(m, DbscanParams(0.5, 1))
    p = cluster_profiles(a, m)
    assert tuple(p["C1"]) == (2, 3) and tuple(p["C2"]) == (9, 9)


def test_border_point_goes_to_first_cluster():
    # 1.0 is within eps of a core point of each cluster but is not core itself
    pts = np.array([[-1.0], [-0.9], [-0.8], [0.0], [1.0], [2.0], [2.8], [2.9], [3.0]])
    labels, core, _ = dbscan_labels(pts, DbscanParams(1.0, 4))
    assert core[3] and core[5] and not core[4]
    assert labels.tolist() == [0, 0, 0, 0, 0, 1, 1, 1, 1]
    # scanning the other cluster first hands the border point to it instead
    labels, _, _ = dbscan_labels(pts[::-1], DbscanParams(1.0, 4))
    assert labels[4] == labels[3] == 0 and labels[5] == 1


def test_noise_can_become_border():
    # point 0 is scanned first as noise, then absorbed as a border of point 1's cluster
    pts = np.array([[0.0], [0.9], [1.0], [1.1]])
    labels, core, _ = dbscan_labels(pts, DbscanParams(0.95, 3))
    assert not core[0]
    assert labels.tolist() == [0, 0, 0, 0]


@pytest.mark.parametrize("n", [5, 20, 50])
def test_distance_evaluations_are_n_squared(n):
    rng = np.random.default_rng(n)
    pts = rng.integers(1, 11, size=(n, 3))
    _, _, evals = dbscan_labels(pts, PAPER)
    assert evals == n * n
