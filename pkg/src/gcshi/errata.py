"""Comparison of recomputed quantities against the published two-decimal values.

Each printed stage is recomputed from the stage printed just before it, so
an error in one printed matrix does not cascade into every later one:

* T (weighted matrix) from the decision matrix and weights,
* ideal / anti-ideal vectors from the printed T,
* separations from the printed T and the printed ideals,
* closeness from the full-precision pipeline.

A cell is an erratum when the recomputed value does not round to the printed
one at two decimals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PAPER_WEIGHTS, DecisionMatrix, bundled_paper_catalog
from .topsis import apply_weights, ideal_solutions, normalize, rank, separation

PRINTED_WEIGHTS = PAPER_WEIGHTS
PRINTED_T = (
    (0.04, 0.29, 0.12),
    (0.04, 0.29, 0.12),
    (0.05, 0.32, 0.12),
    (0.06, 0.25, 0.12),
    (0.06, 0.25, 0.10),
)
PRINTED_BEST = (0.06, 0.32, 0.12)
PRINTED_WORST = (0.04, 0.25, 0.10)
PRINTED_DIST_BEST = (0.05, 0.05, 0.020, 0.07, 0.07)
PRINTED_DIST_WORST = (0.04, 0.04, 0.08, 0.03, 0.03)
PRINTED_CLOSENESS = (0.48, 0.48, 0.80, 0.27, 0.27)


@dataclass(frozen=True)
class CellComparison:
    quantity: str
    row: str
    column: str
    paper: float
    recomputed: float
    basis: str

    @property
    def hundredths_off(self) -> int:
        """Distance in printed units between the rounded recomputed value and the printed one."""
        return abs(round(self.recomputed * 100) - round(self.paper * 100))

    @property
    def erratum(self) -> bool:
        return self.hundredths_off != 0


Erratum = CellComparison


def _cells(quantity, rows, columns, paper, recomputed, basis):
    paper = np.atleast_2d(np.asarray(paper, dtype=float))
    recomputed = np.atleast_2d(np.asarray(recomputed, dtype=float))
    out = []
    for i, r in enumerate(rows):
        for j, c in enumerate(columns):
            out.append(CellComparison(quantity, r, c, float(paper[i, j]), float(recomputed[i, j]), basis))
    return out


def _column(values) -> np.ndarray:
    return np.asarray(values, dtype=float).reshape(-1, 1)


def compare_with_paper(decision: DecisionMatrix | None = None, weights=PRINTED_WEIGHTS) -> list[CellComparison]:
    """Every published cell of T, A_b, A_w, d_b, d_w and S_w next to its recomputation."""
    if decision is None:
        decision = bundled_paper_catalog().decision
    alts, crits = decision.rows, decision.columns
    printed_t = np.asarray(PRINTED_T)

    t = apply_weights(normalize(decision), weights)
    best, worst = ideal_solutions(printed_t)
    d_best = separation(printed_t, PRINTED_BEST)
    d_worst = separation(printed_t, PRINTED_WORST)
    s = rank(decision, weights).closeness

    cells = []
    cells += _cells("T", alts, crits, printed_t, t, "decision matrix x weights")
    cells += _cells("A_b", [""], crits, [PRINTED_BEST], [best], "printed T")
    cells += _cells("A_w", [""], crits, [PRINTED_WORST], [worst], "printed T")
    cells += _cells("d_b", alts, [""], _column(PRINTED_DIST_BEST), _column(d_best), "printed T and A_b")
    cells += _cells("d_w", alts, [""], _column(PRINTED_DIST_WORST), _column(d_worst), "printed T and A_w")
    cells += _cells("S_w", alts, [""], _column(PRINTED_CLOSENESS), _column(s), "full-precision pipeline")
    return cells


def compute_errata(decision: DecisionMatrix | None = None, weights=PRINTED_WEIGHTS) -> list[CellComparison]:
    return [c for c in compare_with_paper(decision, weights) if c.erratum]


def is_paper_problem(decision: DecisionMatrix, weights, kinds=None) -> bool:
    """True when the inputs are exactly the published prioritization problem."""
    if decision != bundled_paper_catalog().decision:
        return False
    w = np.asarray(getattr(weights, "weights", weights), dtype=float)
    if w.shape != (3,) or not np.allclose(w, PRINTED_WEIGHTS, rtol=0, atol=1e-9):
        return False
    return kinds is None or all(str(getattr(k, "value", k)) == "benefit" for k in kinds)
