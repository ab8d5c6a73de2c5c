import numpy as np
import pytest

from gcshi.ahp import (
    ConsistencyError,
    ConvergenceError,
    PairwiseMatrix,
    WeightVector,
    consistency_ratio,
    derive_weights,
    geometric_mean_weights,
    power_iteration,
)

from oracles import ahp_eigen

CANDIDATE = [[1, 1 / 5, 1 / 3], [5, 1, 3], [3, 1 / 3, 1]]
# frozen from the LAPACK eigen-solver oracle
CANDIDATE_WEIGHTS = (0.10472943, 0.63698557, 0.25828499)
CANDIDATE_LAMBDA = 3.038511090558167

E = ("E1", "E2", "E3")


def test_all_ones_matrix():
    w, rep = derive_weights(PairwiseMatrix(E, np.ones((3, 3))))
    np.testing.assert_allclose(w.weights, [1 / 3] * 3, atol=1e-12)
    assert rep.consistency_ratio == pytest.approx(0, abs=1e-12)


def test_candidate_matrix():
    w, rep = derive_weights(PairwiseMatrix(E, CANDIDATE))
    np.testing.assert_allclose(w.weights, CANDIDATE_WEIGHTS, atol=1e-8)
    assert rep.lambda_max == pytest.approx(CANDIDATE_LAMBDA, abs=1e-9)
    assert rep.consistency_ratio == pytest.approx(0.0332, abs=5e-5)
    assert rep.acceptable


def test_candidate_against_eigen_oracle():
    lam, vec = ahp_eigen(CANDIDATE)
    w, rep = derive_weights(PairwiseMatrix(E, CANDIDATE))
    np.testing.assert_allclose(w.weights, vec, atol=1e-9)
    assert rep.lambda_max == pytest.approx(lam, abs=1e-9)


def test_geometric_mean_cross_check_agrees_to_three_decimals():
    w, rep = derive_weights(PairwiseMatrix(E, CANDIDATE))
    np.testing.assert_allclose(rep.geometric_mean_weights, w.weights, atol=5e-4)


def test_consistent_matrix_recovers_weights():
    m = PairwiseMatrix.from_weights(E, [0.2, 0.3, 0.5])
    w, rep = derive_weights(m)
    np.testing.assert_allclose(w.weights, [0.2, 0.3, 0.5], atol=1e-8)
    assert rep.consistency_ratio < 1e-8


@pytest.mark.parametrize(
    "lam, n, expected",
    [(3, 3, 0.0), (3.039, 3, (0.039 / 2) / 0.58), (4.27, 4, 0.09 / 0.90), (2.5, 2, 0.0)],
)
def test_consistency_ratio(lam, n, expected):
    assert consistency_ratio(lam, n) == pytest.approx(expected, abs=1e-12)


def test_consistency_ratio_range():
    with pytest.raises(ValueError):
        consistency_ratio(11.0, 11)
    with pytest.raises(ValueError):
        consistency_ratio(1.0, 1)


def test_random_index_override():
    assert consistency_ratio(3.2, 3, {3: 0.5}) == pytest.approx(0.2)


def test_inconsistent_matrix_strict_mode():
    a = [[1, 9, 1 / 9], [1 / 9, 1, 9], [9, 1 / 9, 1]]
    m = PairwiseMatrix(E, a)
    _, rep = derive_weights(m)
    assert rep.consistency_ratio > 0.10 and not rep.acceptable
    with pytest.raises(ConsistencyError):
        derive_weights(m, strict=True)


@pytest.mark.parametrize(
    "values",
    [
        [[1, 2], [0.4, 1]],  # not reciprocal
        [[1, -2], [-0.5, 1]],  # non-positive
        [[2, 2], [0.5, 1]],  # diagonal
    ],
)
def test_invalid_matrices_rejected(values):
    with pytest.raises(ValueError):
        PairwiseMatrix(("a", "b"), values)


def test_size_limits():
    with pytest.raises(ValueError):
        PairwiseMatrix(tuple("abcdefghijk"), np.ones((11, 11)))


def test_non_convergence_names_budget():
    a = PairwiseMatrix(E, CANDIDATE)
    with pytest.raises(ConvergenceError, match="2 iterations"):
        power_iteration(a.values, tol=1e-300, max_iter=2)


def test_weight_vector_rules():
    with pytest.raises(ValueError):
        WeightVector(("a", "b"), [0.5, 0.6])
    with pytest.raises(ValueError):
        WeightVector(("a", "b"), [1.5, -0.5])
    w = WeightVector.normalized(("a", "b", "c"), [1, 1, 1])
    assert w.weights.sum() == pytest.approx(1, abs=1e-15)


def test_geometric_mean_of_consistent_matrix():
    a = PairwiseMatrix.from_weights(E, [0.1, 0.6, 0.3]).values
    np.testing.assert_allclose(geometric_mean_weights(a), [0.1, 0.6, 0.3], atol=1e-12)
