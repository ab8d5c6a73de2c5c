"""Ranking by closeness to the ideal solution (TOPSIS).

Everything is computed in double precision; rounding is left to the
report layer.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ahp import WeightVector
from .core import DecisionMatrix, Kind


class DegeneracyWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class TopsisResult:
    alternatives: tuple[str, ...]
    criteria: tuple[str, ...]
    normalized: np.ndarray
    weighted: np.ndarray
    best: np.ndarray
    worst: np.ndarray
    dist_best: np.ndarray
    dist_worst: np.ndarray
    closeness: np.ndarray
    ranking: tuple[tuple[str, int], ...]
    ties: tuple[frozenset[str], ...] = ()

    def order(self) -> list[str]:
        return [code for code, _ in self.ranking]

    def ranking_line(self) -> str:
        parts = []
        for k, (code, rank) in enumerate(self.ranking):
            if k:
                parts.append(" = " if rank == self.ranking[k - 1][1] else " > ")
            parts.append(code)
        return "".join(parts)


def _kinds(kinds, n_columns: int) -> list[Kind]:
    if kinds is None:
        return [Kind.BENEFIT] * n_columns
    out = [Kind(k) for k in kinds]
    if len(out) != n_columns:
        raise ValueError(f"{len(out)} criterion kinds given for {n_columns} columns")
    return out


def normalize(matrix) -> np.ndarray:
    """Divide each column by its Euclidean norm; all-zero columns stay zero."""
    x = np.asarray(matrix.values if isinstance(matrix, DecisionMatrix) else matrix, dtype=float)
    norms = np.sqrt((x ** 2).sum(axis=0))
    zero = norms == 0
    if np.any(zero):
        warnings.warn(f"all-zero criterion column(s) {np.flatnonzero(zero).tolist()}", DegeneracyWarning, stacklevel=2)
    return x / np.where(zero, 1.0, norms)


def apply_weights(normalized, weights) -> np.ndarray:
    r = np.asarray(normalized, dtype=float)
    w = np.asarray(weights.weights if isinstance(weights, WeightVector) else weights, dtype=float)
    if w.ndim != 1 or len(w) != r.shape[1]:
        raise ValueError(f"{len(w)} weights given for {r.shape[1]} criteria")
    return r * w


def ideal_solutions(weighted, kinds: Sequence[Kind | str] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-column (best, worst): max/min for benefit criteria, min/max for cost."""
    t = np.asarray(weighted, dtype=float)
    ks = _kinds(kinds, t.shape[1])
    benefit = np.array([k is Kind.BENEFIT for k in ks])
    hi, lo = t.max(axis=0), t.min(axis=0)
    return np.where(benefit, hi, lo), np.where(benefit, lo, hi)


def separation(weighted, reference) -> np.ndarray:
    t = np.asarray(weighted, dtype=float)
    ref = np.asarray(reference, dtype=float)
    if ref.shape != (t.shape[1],):
        raise ValueError("reference length must equal the column count")
    return np.sqrt(((t - ref) ** 2).sum(axis=1))


def closeness(dist_worst, dist_best) -> np.ndarray:
    """``d_worst / (d_worst + d_best)``; 0.5 where both distances vanish."""
    dw = np.asarray(dist_worst, dtype=float)
    db = np.asarray(dist_best, dtype=float)
    if dw.shape != db.shape:
        raise ValueError("distance vectors differ in length")
    total = dw + db
    degenerate = total == 0
    if np.any(degenerate):
        warnings.warn("alternative(s) equidistant at zero from both ideals; closeness set to 0.5", DegeneracyWarning, stacklevel=2)
    return np.where(degenerate, 0.5, dw / np.where(degenerate, 1.0, total))


def _rank(codes: Sequence[str], scores: np.ndarray) -> tuple[tuple[tuple[str, int], ...], tuple[frozenset[str], ...]]:
    order = sorted(range(len(codes)), key=lambda i: -scores[i])  # stable: ties keep input order
    ranking, groups = [], {}
    for pos, i in enumerate(order):
        if pos and scores[i] == scores[order[pos - 1]]:
            rank = ranking[-1][1]
        else:
            rank = pos + 1
        ranking.append((codes[i], rank))
        groups.setdefault(rank, []).append(codes[i])
    ties = tuple(frozenset(g) for g in groups.values() if len(g) > 1)
    return tuple(ranking), ties


def rank(decision: DecisionMatrix, weights, kinds: Sequence[Kind | str] | None = None) -> TopsisResult:
    """Full TOPSIS evaluation of ``decision`` under ``weights``.

    ``weights`` may be a :class:`WeightVector` or a plain sequence. Kinds
    default to benefit for every criterion.
    """
    r = normalize(decision)
    t = apply_weights(r, weights)
    best, worst = ideal_solutions(t, kinds)
    d_best = separation(t, best)
    d_worst = separation(t, worst)
    s = closeness(d_worst, d_best)
    ranking, ties = _rank(decision.rows, s)
    for arr in (r, t, best, worst, d_best, d_worst, s):
        arr.setflags(write=False)
    return TopsisResult(
        alternatives=decision.rows,
        criteria=decision.columns,
        normalized=r,
        weighted=t,
        best=best,
        worst=worst,
        dist_best=d_best,
        dist_worst=d_worst,
        closeness=s,
        ranking=ranking,
        ties=ties,
    )
