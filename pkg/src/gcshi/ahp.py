"""Pairwise-comparison (AHP) criterion weighting and consistency checking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

# Saaty random consistency index, keyed by matrix size.
RANDOM_INDEX: Mapping[int, float] = {
    1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
    6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
}
CR_THRESHOLD = 0.10
RECIPROCAL_RTOL = 1e-9


class ConvergenceError(ArithmeticError):
    pass


class ConsistencyError(ValueError):
    def __init__(self, report: ConsistencyReport, threshold: float = CR_THRESHOLD):
        self.report = report
        super().__init__(
            f"consistency ratio {report.consistency_ratio:.4f} exceeds {threshold:.2f}"
        )


@dataclass(frozen=True, eq=False)
class PairwiseMatrix:
    criteria: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        criteria = tuple(self.criteria)
        a = np.array(self.values, dtype=float)
        object.__setattr__(self, "criteria", criteria)
        n = len(criteria)
        if a.ndim != 2 or a.shape != (n, n):
            raise ValueError(f"pairwise matrix must be {n}x{n}, got shape {a.shape}")
        if not 2 <= n <= 10:
            raise ValueError(f"pairwise matrix size must be within 2..10, got {n}")
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise ValueError("pairwise matrix entries must be positive and finite")
        if not np.allclose(np.diag(a), 1.0, rtol=0, atol=RECIPROCAL_RTOL):
            raise ValueError("pairwise matrix diagonal must be 1")
        product = a * a.T
        bad = np.argwhere(np.abs(product - 1.0) > RECIPROCAL_RTOL)
        if len(bad):
            i, j = bad[0]
            raise ValueError(
                f"pairwise matrix is not reciprocal at ({criteria[i]}, {criteria[j]}): "
                f"{a[i, j]} * {a[j, i]} != 1"
            )
        a.setflags(write=False)
        object.__setattr__(self, "values", a)

    def __eq__(self, other):
        if not isinstance(other, PairwiseMatrix):
            return NotImplemented
        return self.criteria == other.criteria and np.array_equal(self.values, other.values)

    @property
    def size(self) -> int:
        return len(self.criteria)

    @classmethod
    def from_weights(cls, criteria: Sequence[str], weights: Sequence[float]) -> PairwiseMatrix:
        """Perfectly consistent matrix ``a_ij = w_i / w_j``."""
        w = np.asarray(weights, dtype=float)
        return cls(tuple(criteria), w[:, None] / w[None, :])


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Criterion weights summing to one.

    Zero weights are allowed so a criterion can be switched off; AHP-derived
    weights are always strictly positive.
    """

    criteria: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        object.__setattr__(self, "criteria", tuple(self.criteria))
        if w.ndim != 1 or len(w) != len(self.criteria):
            raise ValueError("weights and criteria must have equal length")
        if len(w) == 0:
            raise ValueError("at least one weight is required")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and non-negative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        return self.criteria == other.criteria and np.array_equal(self.weights, other.weights)

    def __len__(self):
        return len(self.weights)

    @classmethod
    def normalized(cls, criteria: Sequence[str], raw: Sequence[float]) -> WeightVector:
        w = np.asarray(raw, dtype=float)
        total = w.sum()
        if not total > 0:
            raise ValueError("weights must have a positive sum")
        w = w / total
        # absorb the last rounding ulp so the sum invariant holds
        w[-1] = 1.0 - w[:-1].sum() if len(w) > 1 else 1.0
        return cls(tuple(criteria), w)


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    consistency_index: float
    consistency_ratio: float
    acceptable: bool
    geometric_mean_weights: tuple[float, ...] = ()
    iterations: int = 0


def power_iteration(a, tol: float = 1e-10, max_iter: int = 10_000) -> tuple[float, np.ndarray, int]:
    """Principal eigenpair of a positive matrix.

    The returned vector is scaled to sum to one. Iteration stops once the
    largest relative change of any component drops below ``tol``.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        y = a @ x
        lam = y.sum()  # x sums to 1
        y = y / lam
        if np.max(np.abs(y - x) / np.abs(y)) < tol:
            return float(lam), y, it
        x = y
    raise ConvergenceError(f"power iteration did not converge within {max_iter} iterations")


def consistency_ratio(lambda_max: float, n: int, random_index: Mapping[int, float] | None = None) -> float:
    ri_table = RANDOM_INDEX if random_index is None else random_index
    if n not in ri_table or n < 2:
        raise ValueError(f"no random index for matrix size {n}")
    ri = ri_table[n]
    if ri == 0:
        return 0.0
    ci = (lambda_max - n) / (n - 1)
    return ci / ri


def geometric_mean_weights(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    g = np.exp(np.log(a).mean(axis=1))
    return g / g.sum()


def derive_weights(
    matrix: PairwiseMatrix,
    *,
    strict: bool = False,
    threshold: float = CR_THRESHOLD,
    random_index: Mapping[int, float] | None = None,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> tuple[WeightVector, ConsistencyReport]:
    """Eigenvector weights and consistency report for a pairwise matrix.

    With ``strict=True`` a consistency ratio above ``threshold`` raises
    :class:`ConsistencyError` instead of being flagged in the report.
    """
    n = matrix.size
    lam, vec, iterations = power_iteration(matrix.values, tol=tol, max_iter=max_iter)
    cr = consistency_ratio(lam, n, random_index)
    report = ConsistencyReport(
        lambda_max=lam,
        consistency_index=(lam - n) / (n - 1),
        consistency_ratio=cr,
        acceptable=cr <= threshold,
        geometric_mean_weights=tuple(float(v) for v in geometric_mean_weights(matrix.values)),
        iterations=iterations,
    )
    if strict and not report.acceptable:
        raise ConsistencyError(report, threshold)
    return WeightVector.normalized(matrix.criteria, vec), report
