"""Reading datasets from CSV/JSON and serializing reports.

CSV files use a header row; the first column holds row labels. JSON floats
are written with ``repr`` so every double survives a round trip unchanged.
"""

from __future__ import annotations

import csv
import io as _io
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .ahp import PairwiseMatrix, WeightVector
from .core import (
    Activity,
    Category,
    Criterion,
    DecisionMatrix,
    ExpertProfile,
    Kind,
    PaperCatalog,
    RatingMatrix,
    Stage,
    ValidationError,
    validate_decision_matrix,
    validate_rating_matrix,
)

if TYPE_CHECKING:
    from .pipeline import PipelineReport

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0"
FORMATS = ("json", "markdown", "plot-data")


class DataError(OSError):
    """A data file is missing, unreadable or malformed."""


@dataclass(frozen=True)
class DataReference:
    path: Path
    format: str = ""

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path))
        fmt = (self.format or self.path.suffix.lstrip(".")).lower()
        if fmt not in ("csv", "json"):
            raise ValueError(f"cannot infer data format of {self.path}; use .csv or .json")
        object.__setattr__(self, "format", fmt)


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("gcshi") / "data" / name))


def _ref(ref) -> DataReference:
    return ref if isinstance(ref, DataReference) else DataReference(ref)


def _read_text(ref: DataReference) -> str:
    try:
        return ref.path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise DataError(f"{ref.path}: file not found") from exc
    except OSError as exc:
        raise DataError(f"{ref.path}: {exc.strerror or exc}") from exc


def _parse_number(text: str, where: str) -> float:
    try:
        value = float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise DataError(f"{where}: cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise DataError(f"{where}: non-finite value {text!r}")
    return value


def _read_labeled_csv(ref: DataReference) -> tuple[list[str], list[str], list[list[float]]]:
    rows = list(csv.reader(_io.StringIO(_read_text(ref))))
    while rows and not any(c.strip() for c in rows[-1]):
        rows.pop()
    if not rows or not any(c.strip() for c in rows[0]):
        raise DataError(f"{ref.path}: no header")
    header = [c.strip() for c in rows[0]]
    columns = header[1:]
    if not columns:
        raise DataError(f"{ref.path}, line 1: header defines no criterion columns")
    labels, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        if len(cells) != len(header):
            raise DataError(
                f"{ref.path}, line {lineno}: expected {len(header)} cells, found {len(cells)}"
            )
        labels.append(cells[0])
        parsed = []
        for col, cell in zip(columns, cells[1:]):
            where = f"{ref.path}, line {lineno}, row {cells[0]}, column {col}"
            if cell == "":
                raise DataError(f"{where}: missing cell")
            parsed.append(_parse_number(cell, where))
        values.append(parsed)
    return labels, columns, values


def _read_labeled_json(ref: DataReference) -> tuple[list[str], list[str], list[list[float]]]:
    doc = _load_json(ref)
    try:
        rows, columns, values = doc["rows"], doc["columns"], doc["values"]
    except (KeyError, TypeError):
        raise DataError(f"{ref.path}: expected an object with rows, columns and values") from None
    out = []
    for i, row in enumerate(values):
        if len(row) != len(columns):
            raise DataError(f"{ref.path}: row {i} ({rows[i] if i < len(rows) else '?'}) has {len(row)} cells, expected {len(columns)}")
        cells = []
        for col, v in zip(columns, row):
            if v is None:
                raise DataError(f"{ref.path}: row {rows[i]}, column {col}: missing cell")
            cells.append(_parse_number(str(v), f"{ref.path}: row {rows[i]}, column {col}"))
        out.append(cells)
    if len(out) != len(rows):
        raise DataError(f"{ref.path}: {len(rows)} row labels for {len(out)} value rows")
    return list(rows), list(columns), out


def _load_json(ref: DataReference):
    try:
        return json.loads(_read_text(ref))
    except json.JSONDecodeError as exc:
        raise DataError(f"{ref.path}, line {exc.lineno}: {exc.msg}") from None


def _read_labeled(ref: DataReference):
    return _read_labeled_csv(ref) if ref.format == "csv" else _read_labeled_json(ref)


def load_rating_matrix(ref) -> RatingMatrix:
    ref = _ref(ref)
    rows, columns, values = _read_labeled(ref)
    if not rows:
        raise DataError(f"{ref.path}: no data rows")
    try:
        matrix = RatingMatrix(rows, columns, values)
    except ValueError as exc:
        raise ValidationError([str(exc)]) from None
    violations = validate_rating_matrix(matrix)
    if violations:
        raise ValidationError(violations)
    return matrix


def load_decision_matrix(ref) -> DecisionMatrix:
    ref = _ref(ref)
    rows, columns, values = _read_labeled(ref)
    try:
        matrix = DecisionMatrix(rows, columns, values if rows else np.zeros((0, len(columns))))
    except ValueError as exc:
        raise ValidationError([str(exc)]) from None
    violations = validate_decision_matrix(matrix)
    if violations:
        raise ValidationError(violations)
    return matrix


def normalize_weights(raw: Sequence[float], criteria: Sequence[str] | None = None) -> tuple[WeightVector, list[str]]:
    """Rescale raw weights to sum to one, noting any material rescaling."""
    raw = [float(w) for w in raw]
    criteria = tuple(criteria) if criteria else tuple(f"E{i + 1}" for i in range(len(raw)))
    notes = []
    total = sum(raw)
    if abs(total - 1.0) > 1e-6:
        notes.append(f"weights renormalized: raw sum {total:g}")
    return WeightVector.normalized(criteria, raw), notes


def _split_numeric(rows: list[list[str]], where: str):
    """Strip an optional non-numeric header row and label column."""
    def numeric(s):
        try:
            Fraction(s) if "/" in s else float(s)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    header = None
    if rows and not all(numeric(c) for c in rows[0]):
        header, rows = rows[0], rows[1:]
    labels = None
    if rows and all(not numeric(r[0]) for r in rows):
        labels = [r[0] for r in rows]
        rows = [r[1:] for r in rows]
        if header is not None and len(header) == len(rows[0]) + 1:
            header = header[1:]
    block = []
    for i, r in enumerate(rows):
        block.append([_parse_number(c, f"{where}, data row {i + 1}") for c in r])
    return header, labels, block


def _weights_from_block(block, header, labels, where: str) -> WeightVector | PairwiseMatrix:
    arr = np.asarray(block, dtype=float) if block else np.zeros((0, 0))
    if arr.ndim == 2 and arr.shape[0] >= 2 and arr.shape[0] == arr.shape[1]:
        criteria = header or labels or [f"E{i + 1}" for i in range(arr.shape[0])]
        try:
            return PairwiseMatrix(tuple(criteria), arr)
        except ValueError as exc:
            raise ValidationError([f"{where}: {exc}"]) from None
    if arr.ndim == 2 and (arr.shape[0] == 1 or arr.shape[1] == 1) and arr.size >= 1 and arr.shape != (1, 1):
        names = header if arr.shape[0] == 1 else labels
        vec, notes = normalize_weights(arr.ravel(), names)
        for note in notes:
            log.info("%s: %s", where, note)
        return vec
    raise ValidationError([
        f"{where}: ambiguous weight shape {arr.shape}; give a single row or column of "
        "weights, or a square reciprocal pairwise matrix"
    ])


def load_weights(ref) -> WeightVector | PairwiseMatrix:
    """Load either a weight vector or a pairwise comparison matrix.

    The shape decides: one row/column of numbers is a vector, an n x n block
    (n >= 2) is a pairwise matrix. Optional header row and label column hold
    criterion ids.
    """
    ref = _ref(ref)
    where = str(ref.path)
    if ref.format == "csv":
        rows = [[c.strip() for c in r] for r in csv.reader(_io.StringIO(_read_text(ref))) if any(c.strip() for c in r)]
        if not rows:
            raise DataError(f"{where}: no data")
        header, labels, block = _split_numeric(rows, where)
        return _weights_from_block(block, header, labels, where)
    doc = _load_json(ref)
    names = None
    if isinstance(doc, dict):
        names = doc.get("criteria")
        if "pairwise" in doc:
            doc = doc["pairwise"]
        elif "weights" in doc:
            doc = doc["weights"]
        else:
            raise DataError(f"{where}: expected 'weights' or 'pairwise' key")
    if isinstance(doc, list) and doc and all(isinstance(v, (int, float)) for v in doc):
        doc = [doc]
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise DataError(f"{where}: weights must be a list of numbers or a square list of lists")
    block = [[_parse_number(str(v), where) for v in r] for r in doc]
    if len({len(r) for r in block}) > 1:
        raise ValidationError([f"{where}: ragged weight matrix"])
    return _weights_from_block(block, names, names, where)


# ---------------------------------------------------------------------------
# Dataset serialization
# ---------------------------------------------------------------------------

def _fmt_cell(v) -> str:
    v = float(v)
    return str(int(v)) if v == int(v) and abs(v) < 2**53 else repr(v)


def dump_matrix(matrix: RatingMatrix | DecisionMatrix, fmt: str = "csv", corner: str = "code") -> str:
    if fmt == "json":
        return json.dumps(
            {"rows": list(matrix.rows), "columns": list(matrix.columns), "values": _jsonable(matrix.values)},
            indent=2,
        ) + "\n"
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([corner, *matrix.columns])
    for code, row in zip(matrix.rows, matrix.values):
        w.writerow([code, *(_fmt_cell(v) for v in row)])
    return buf.getvalue()


def dump_weights(weights: WeightVector | PairwiseMatrix, fmt: str = "csv") -> str:
    if isinstance(weights, WeightVector):
        if fmt == "json":
            return json.dumps({"criteria": list(weights.criteria), "weights": _jsonable(weights.weights)}, indent=2) + "\n"
        return ",".join(weights.criteria) + "\n" + ",".join(repr(float(w)) for w in weights.weights) + "\n"
    if fmt == "json":
        return json.dumps({"criteria": list(weights.criteria), "pairwise": _jsonable(weights.values)}, indent=2) + "\n"
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["criterion", *weights.criteria])
    for c, row in zip(weights.criteria, weights.values):
        w.writerow([c, *(repr(float(v)) for v in row)])
    return buf.getvalue()


def catalog_to_json(catalog: PaperCatalog) -> str:
    doc = {
        "activities": [{"code": a.code, "name": a.name, "description": a.description} for a in catalog.activities],
        "criteria": [
            {"id": c.id, "name": c.name, "kind": c.kind.value, "stage": c.stage.value}
            for c in (*catalog.g_criteria, *catalog.e_criteria)
        ],
        "ratings": json.loads(dump_matrix(catalog.ratings, "json")),
        "decision": json.loads(dump_matrix(catalog.decision, "json")),
        "experts": [
            {"id": x.id, "profession": x.profession, "education": x.education, "experience": x.experience}
            for x in catalog.experts
        ],
        "categories": [
            {"code": c.code, "name": c.name, "members": sorted(c.members, key=_natural_key)}
            for c in catalog.categories
        ],
        "delphi_iterations": catalog.delphi_iterations,
        "notes": list(catalog.notes),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def catalog_from_json(text: str) -> PaperCatalog:
    doc = json.loads(text)
    criteria = [Criterion(c["id"], c["name"], Kind(c["kind"]), Stage(c["stage"])) for c in doc["criteria"]]
    r, d = doc["ratings"], doc["decision"]
    return PaperCatalog(
        activities=tuple(Activity(**a) for a in doc["activities"]),
        g_criteria=tuple(c for c in criteria if c.stage is Stage.CATEGORIZATION),
        e_criteria=tuple(c for c in criteria if c.stage is Stage.PRIORITIZATION),
        ratings=RatingMatrix(r["rows"], r["columns"], r["values"]),
        decision=DecisionMatrix(d["rows"], d["columns"], d["values"]),
        experts=tuple(ExpertProfile(**x) for x in doc["experts"]),
        categories=tuple(Category(c["code"], c["name"], frozenset(c["members"])) for c in doc["categories"]),
        delphi_iterations=doc["delphi_iterations"],
        notes=tuple(doc["notes"]),
    )


def _natural_key(code: str):
    head = code.rstrip("0123456789")
    tail = code[len(head):]
    return (head, int(tail) if tail else -1)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def report_to_dict(report: PipelineReport) -> dict:
    doc: dict = {"schema_version": SCHEMA_VERSION, "provenance": list(report.provenance)}

    if report.assignment is not None:
        a = report.assignment
        doc["clustering"] = {
            "params": {"epsilon": float(a.params.epsilon), "min_pts": int(a.params.min_pts)},
            "clusters": [
                {"code": c.code, "name": c.name, "members": sorted(c.members, key=_natural_key)}
                for c in a.clusters
            ],
            "noise": sorted(a.noise, key=_natural_key),
            "core_points": sorted(a.core, key=_natural_key),
            "distance_evaluations": a.distance_evaluations,
            "profiles": {
                "criteria": list(report.rating_criteria),
                "means": {code: _jsonable(v) for code, v in (report.profiles or {}).items()},
            },
        }

    if report.weights is not None:
        w = {
            "source": report.weight_source,
            "criteria": list(report.weights.criteria),
            "weights": _jsonable(report.weights.weights),
        }
        if report.consistency is not None:
            c = report.consistency
            w["consistency"] = {
                "lambda_max": c.lambda_max,
                "consistency_index": c.consistency_index,
                "consistency_ratio": c.consistency_ratio,
                "acceptable": bool(c.acceptable),
                "geometric_mean_weights": list(c.geometric_mean_weights),
                "iterations": c.iterations,
            }
        doc["weights"] = w

    if report.topsis is not None:
        t = report.topsis
        doc["topsis"] = {
            "alternatives": list(t.alternatives),
            "criteria": list(t.criteria),
            "kinds": list(report.kinds),
            "normalized": _jsonable(t.normalized),
            "weighted": _jsonable(t.weighted),
            "best": _jsonable(t.best),
            "worst": _jsonable(t.worst),
            "dist_best": _jsonable(t.dist_best),
            "dist_worst": _jsonable(t.dist_worst),
            "closeness": _jsonable(t.closeness),
            "ranking": [{"code": code, "rank": r} for code, r in t.ranking],
            "ties": [sorted(g, key=_natural_key) for g in t.ties],
        }

    if report.errata:
        doc["errata"] = [
            {"quantity": e.quantity, "row": e.row, "column": e.column, "paper": e.paper,
             "recomputed": e.recomputed, "basis": e.basis}
            for e in report.errata
        ]

    if report.sensitivity is not None:
        s = report.sensitivity
        doc["sensitivity"] = {
            "radius": s.radius,
            "samples": s.samples,
            "seed": s.seed,
            "base_order": list(s.base_order),
            "top_rank_frequency": dict(s.top_rank_frequency),
            "rank_reversal_frequency": [
                {"above": a, "below": b, "frequency": f} for (a, b), f in s.reversal_frequency.items()
            ],
            "sample_rankings": [list(r) for r in s.sample_rankings],
        }

    if report.checks:
        doc["acceptance"] = [{"name": c.name, "passed": bool(c.passed), "detail": c.detail} for c in report.checks]
    return doc


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return lines


def _f4(v) -> str:
    return f"{float(v):.4f}"


def report_to_markdown(report: PipelineReport) -> str:
    out = ["# GCS-HI report", ""]
    if report.assignment is not None:
        a = report.assignment
        out += [
            "## Categorization",
            "",
            f"epsilon = {a.params.epsilon:g}, MinPts = {a.params.min_pts}; "
            f"{len(a.clusters)} clusters, {len(a.noise)} noise; "
            f"{a.distance_evaluations} distance evaluations",
            "",
        ]
        out += _md_table(
            ["Cluster", "Members", "Name"],
            [(c.code, ", ".join(sorted(c.members, key=_natural_key)), c.name) for c in a.clusters],
        )
        if a.noise:
            out += ["", "Noise: " + ", ".join(sorted(a.noise, key=_natural_key))]
        if report.profiles:
            out += ["", "### Cluster profiles (mean rating)", ""]
            out += _md_table(
                ["Cluster", *report.rating_criteria],
                [(code, *(_f4(v) for v in means)) for code, means in report.profiles.items()],
            )
        out.append("")

    if report.weights is not None:
        out += ["## Criterion weights", "", f"source: {report.weight_source}", ""]
        out += _md_table(["Criterion", "Weight"], [(c, _f4(w)) for c, w in zip(report.weights.criteria, report.weights.weights)])
        if report.consistency is not None:
            c = report.consistency
            out += [
                "",
                f"lambda_max = {c.lambda_max:.4f}, CI = {c.consistency_index:.4f}, "
                f"CR = {c.consistency_ratio:.4f} ({'acceptable' if c.acceptable else 'NOT acceptable'})",
                "geometric-mean cross-check: " + ", ".join(_f4(v) for v in c.geometric_mean_weights),
            ]
        out.append("")

    if report.topsis is not None:
        t = report.topsis
        rank_of = dict(t.ranking)
        out += ["## Prioritization", ""]
        out += _md_table(
            ["Alternative", "d_best", "d_worst", "Closeness", "Rank"],
            [
                (code, _f4(t.dist_best[i]), _f4(t.dist_worst[i]), _f4(t.closeness[i]), rank_of[code])
                for i, code in enumerate(t.alternatives)
            ],
        )
        out += ["", f"Ideal: {', '.join(_f4(v) for v in t.best)}", f"Anti-ideal: {', '.join(_f4(v) for v in t.worst)}", "", f"Ranking: {t.ranking_line()}"]
        if t.ties:
            out.append("Ties (broken by input order): " + "; ".join(", ".join(sorted(g, key=_natural_key)) for g in t.ties))
        out.append("")

    if report.errata:
        out += ["## Errata (printed vs recomputed)", ""]
        out += _md_table(
            ["Quantity", "Row", "Column", "Paper", "Recomputed", "Basis"],
            [(e.quantity, e.row, e.column or "-", f"{e.paper:.2f}", f"{e.recomputed:.3f}", e.basis) for e in report.errata],
        )
        out.append("")

    if report.sensitivity is not None:
        s = report.sensitivity
        out += ["## Sensitivity", "", f"radius = {s.radius:g}, samples = {s.samples}, seed = {s.seed}", ""]
        out += _md_table(["Alternative", "Top-rank frequency"], [(k, _f4(v)) for k, v in s.top_rank_frequency.items()])
        reversals = [(a, b, f) for (a, b), f in s.reversal_frequency.items() if f > 0]
        if reversals:
            out += ["", "Rank reversals (base order above > below):", ""]
            out += _md_table(["Above", "Below", "Frequency"], [(a, b, _f4(f)) for a, b, f in reversals])
        out.append("")

    if report.checks:
        out += ["## Acceptance checks", ""]
        out += _md_table(["Check", "Result", "Detail"], [(c.name, "pass" if c.passed else "FAIL", c.detail) for c in report.checks])
        out.append("")

    if report.provenance:
        out += ["## Provenance", ""] + [f"- {p}" for p in report.provenance] + [""]
    return "\n".join(out)


def report_to_plot_data(report: PipelineReport) -> str:
    """CSV of ``series,x,y`` points: one series per rating criterion, plus closeness."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "x", "y"])
    if report.profiles:
        for j, crit in enumerate(report.rating_criteria):
            for code, means in report.profiles.items():
                w.writerow([crit, code, _fmt_cell(means[j])])
    if report.topsis is not None:
        for code, s in zip(report.topsis.alternatives, report.topsis.closeness):
            w.writerow(["closeness", code, repr(float(s))])
    return buf.getvalue()


def emit_report(report: PipelineReport, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"
    if format == "markdown":
        return report_to_markdown(report)
    if format == "plot-data":
        return report_to_plot_data(report)
    raise ValueError(f"unknown report format {format!r}; choose from {', '.join(FORMATS)}")


def report_schema() -> dict:
    return json.loads(bundled_path("report.schema.json").read_text(encoding="utf-8"))
