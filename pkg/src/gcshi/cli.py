"""Command-line entry point.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 consistency
failure in strict mode, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .ahp import ConsistencyError, ConvergenceError, PairwiseMatrix, derive_weights
from .cluster import DbscanParams, cluster_profiles, dbscan
from .core import PAPER_EPSILON, PAPER_MIN_PTS, Kind, ValidationError
from .io import DataError, bundled_path, emit_report, load_decision_matrix, load_rating_matrix, load_weights, normalize_weights
from .pipeline import (
    PipelineReport,
    SensitivityError,
    StageError,
    load_config,
    reproduce,
    run,
    sensitivity,
)
from .topsis import rank

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_CONSISTENCY, EXIT_NUMERICAL = 0, 1, 2, 3, 4


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _kinds(text: str) -> list[str]:
    try:
        return [Kind(k.strip()).value for k in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("kinds must be a comma-separated list of benefit/cost") from None


def _write(report: PipelineReport, out: Path | None, fmt: str) -> None:
    if out is None:
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(emit_report(report, fmt), encoding="utf-8")


def _resolve_weights(args, columns):
    """Weights from --weights or --pairwise; returns (vector, consistency, notes)."""
    if args.weights is not None:
        vec, notes = normalize_weights(args.weights, columns)
        return vec, None, notes
    loaded = load_weights(args.pairwise)
    if isinstance(loaded, PairwiseMatrix):
        vec, report = derive_weights(loaded, strict=getattr(args, "strict", False))
        return vec, report, []
    return loaded, None, []


def cmd_cluster(args) -> int:
    params = DbscanParams(args.eps, args.min_pts)
    ratings = load_rating_matrix(args.ratings)
    assignment = dbscan(ratings, params)
    report = PipelineReport(
        assignment=assignment,
        profiles=cluster_profiles(assignment, ratings),
        rating_criteria=ratings.columns,
    )
    _write(report, args.out, args.format)
    print(f"{len(assignment.clusters)} clusters, {len(assignment.noise)} noise")
    return EXIT_OK


def cmd_weights(args) -> int:
    if args.weights is not None:
        vec, notes = normalize_weights(args.weights)
        for note in notes:
            print(note)
        print("weights: " + " ".join(f"{c}={w:.4f}" for c, w in zip(vec.criteria, vec.weights)))
        return EXIT_OK
    matrix = load_weights(args.pairwise)
    if not isinstance(matrix, PairwiseMatrix):
        raise ValidationError([f"{args.pairwise}: expected a square pairwise matrix"])
    try:
        vec, report = derive_weights(matrix, strict=args.strict)
    except ConsistencyError as exc:
        print(f"CR = {exc.report.consistency_ratio:.4f} (exceeds 0.10)")
        raise
    print("weights: " + " ".join(f"{c}={w:.4f}" for c, w in zip(vec.criteria, vec.weights)))
    print(f"lambda_max = {report.lambda_max:.4f}")
    print(f"CR = {report.consistency_ratio:.4f} ({'acceptable' if report.acceptable else 'not acceptable'})")
    return EXIT_OK


def cmd_rank(args) -> int:
    decision = load_decision_matrix(args.decision)
    weights, consistency, notes = _resolve_weights(args, decision.columns)
    if len(weights) != len(decision.columns):
        raise ValidationError([f"{len(weights)} weights for {len(decision.columns)} decision criteria"])
    if args.kinds is not None and len(args.kinds) != len(decision.columns):
        raise ValidationError([f"{len(args.kinds)} kinds for {len(decision.columns)} decision criteria"])
    kinds = tuple(args.kinds) if args.kinds else tuple("benefit" for _ in decision.columns)
    result = rank(decision, weights, kinds)
    report = PipelineReport(
        weights=weights,
        weight_source="pairwise" if consistency else "explicit",
        consistency=consistency,
        topsis=result,
        kinds=kinds,
        provenance=tuple(notes),
    )
    _write(report, args.out, args.format)
    print(result.ranking_line())
    return EXIT_OK


def cmd_pipeline(args) -> int:
    report = run(load_config(args.config))
    _write(report, args.out, args.format)
    if report.assignment is not None:
        print(f"{len(report.assignment.clusters)} clusters, {len(report.assignment.noise)} noise")
    if report.topsis is not None:
        print(report.topsis.ranking_line())
    return EXIT_OK


def cmd_reproduce(args) -> int:
    report = reproduce()
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(emit_report(report, "json"), encoding="utf-8")
    (out / "report.md").write_text(emit_report(report, "markdown"), encoding="utf-8")
    (out / "plot-data.csv").write_text(emit_report(report, "plot-data"), encoding="utf-8")
    for check in report.checks:
        print(f"{'PASS' if check.passed else 'FAIL'}  {check.name}: {check.detail}")
    checks = {c.name: c for c in report.checks}
    table3 = "exact match" if checks["published clusters"].passed else "MISMATCH"
    sw = checks["S_w (C2-C5)"]
    print(
        f"Table III: {table3}; S_w (C2–C5): {sw.detail.replace('max abs delta = ', 'max |Δ| = ')}"
        f"{' ≤ 0.01' if sw.passed else ' > 0.01'}; documented errata: {len(report.errata)} cells"
    )
    return EXIT_OK if all(c.passed for c in report.checks) else EXIT_VALIDATION


def cmd_sensitivity(args) -> int:
    decision = load_decision_matrix(args.decision)
    weights, _, _ = _resolve_weights(args, decision.columns)
    result = sensitivity(decision, weights, args.radius, args.samples, args.seed, args.kinds)
    _write(PipelineReport(sensitivity=result), args.out, args.format)
    for code, freq in result.top_rank_frequency.items():
        print(f"{code} top-rank frequency {freq:.4f}")
    return EXIT_OK


def _add_weight_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--weights", type=_float_list, help="comma-separated weights, e.g. 0.11,0.63,0.26")
    g.add_argument("--pairwise", type=Path, help="pairwise comparison matrix (csv or json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gcshi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    formats = ("json", "markdown", "plot-data")

    p = sub.add_parser("cluster", help="categorize activities with DBSCAN")
    p.add_argument("--ratings", type=Path, default=bundled_path("ratings.csv"))
    p.add_argument("--eps", type=float, default=PAPER_EPSILON)
    p.add_argument("--min-pts", type=int, default=PAPER_MIN_PTS)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=formats, default="json")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("weights", help="derive or normalize criterion weights")
    _add_weight_source(p)
    p.add_argument("--strict", action="store_true", help="fail (exit 3) when CR > 0.10")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("rank", help="rank alternatives with TOPSIS")
    p.add_argument("--decision", type=Path, default=bundled_path("decision.csv"))
    _add_weight_source(p)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--kinds", type=_kinds)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=formats, default="json")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("pipeline", help="run a configured end-to-end analysis")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=formats, default="json")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("reproduce", help="rerun the published study from bundled data")
    p.add_argument("--out-dir", type=Path, default=Path("gcshi-reproduce"))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sensitivity", help="rank stability under weight perturbation")
    p.add_argument("--decision", type=Path, default=bundled_path("decision.csv"))
    _add_weight_source(p)
    p.add_argument("--kinds", type=_kinds)
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=formats, default="json")
    p.set_defaults(func=cmd_sensitivity)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, StageError) and exc.__cause__ is not None:
        return _exit_code(exc.__cause__)
    if isinstance(exc, ConsistencyError):
        return EXIT_CONSISTENCY
    if isinstance(exc, (OSError, DataError)):
        return EXIT_IO
    if isinstance(exc, (ConvergenceError, ArithmeticError, SensitivityError)):
        return EXIT_NUMERICAL
    if isinstance(exc, (ValidationError, ValueError, KeyError)):
        return EXIT_VALIDATION
    return EXIT_NUMERICAL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
