import json

import numpy as np
import pytest

from gcshi.ahp import ConsistencyError, WeightVector
from gcshi.core import bundled_paper_catalog
from gcshi.io import bundled_path, emit_report
from gcshi.pipeline import (
    PipelineConfig,
    SensitivityConfig,
    SensitivityError,
    StageError,
    load_config,
    paper_config,
    reproduce,
    run,
    sensitivity,
)


@pytest.fixture(scope="module")
def decision():
    return bundled_paper_catalog().decision


@pytest.fixture(scope="module")
def paper_weights():
    return WeightVector.normalized(("E1", "E2", "E3"), [0.11, 0.63, 0.26])


def test_paper_run():
    report = run(paper_config())
    assert len(report.assignment.clusters) == 5
    np.testing.assert_allclose(report.weights.weights, [0.11, 0.63, 0.26], atol=1e-12)
    assert report.topsis.ranking[0] == ("C3", 1)
    assert report.errata
    assert report.sensitivity is None
    assert report.assignment.distance_evaluations == 400


def test_paper_run_via_pairwise():
    report = run(paper_config(weights=None, weights_file=bundled_path("pairwise.csv")))
    np.testing.assert_allclose(report.weights.weights, [0.11, 0.63, 0.26], atol=0.01)
    assert report.consistency.acceptable
    assert report.topsis.ranking[0] == ("C3", 1)
    assert report.errata == ()  # not the published weights


def test_single_criterion_weights():
    report = run(paper_config(weights=(1, 0, 0)))
    assert report.topsis.ranking[0] == ("C5", 1)
    assert report.errata == ()


def test_bundled_config_file():
    report = run(load_config(bundled_path("paper_config.json")))
    assert report.topsis.ranking_line() == "C3 > C2 > C4 > C5 > C1"


def test_config_rejects_two_weight_sources():
    with pytest.raises(ValueError, match="exactly one"):
        PipelineConfig(decision=bundled_path("decision.csv"), weights=(1, 1, 1), weights_file=bundled_path("pairwise.csv"))
    with pytest.raises(ValueError):
        PipelineConfig(decision=bundled_path("decision.csv"))


def test_config_relative_paths(tmp_path):
    (tmp_path / "d.csv").write_text(bundled_path("decision.csv").read_text())
    (tmp_path / "cfg.json").write_text(json.dumps({"decision": "d.csv", "weights": [1, 1, 1]}))
    cfg = load_config(tmp_path / "cfg.json")
    assert cfg.decision == tmp_path / "d.csv"
    assert cfg.ratings is None


def test_config_unknown_key(tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"ratingz": "x.csv"}))
    with pytest.raises(ValueError, match="ratingz"):
        load_config(tmp_path / "cfg.json")


def test_config_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.file")


def test_strict_consistency_aborts(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,9,1/9\n1/9,1,9\n9,1/9,1\n")
    cfg = paper_config(weights=None, weights_file=p, strict=True)
    with pytest.raises(StageError) as exc:
        run(cfg)
    assert exc.value.stage == "prioritization"
    assert isinstance(exc.value.__cause__, ConsistencyError)
    # non-strict runs and flags it
    report = run(paper_config(weights=None, weights_file=p))
    assert not report.consistency.acceptable


def test_stage_isolation(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("activity,G1\nL1,99\n")
    with pytest.raises(StageError) as exc:
        run(paper_config(ratings=bad))
    assert exc.value.stage == "categorization"
    poc_only = run(paper_config(ratings=None))
    assert poc_only.assignment is None and poc_only.topsis is not None

    bad_decision = tmp_path / "d.csv"
    bad_decision.write_text("category,E1\nC1,-3\nC2,1\n")
    with pytest.raises(StageError) as exc:
        run(paper_config(decision=bad_decision))
    assert exc.value.stage == "prioritization"
    coa_only = run(PipelineConfig(ratings=bundled_path("ratings.csv")))
    assert coa_only.topsis is None and len(coa_only.assignment.clusters) == 5


def test_row_code_mismatch_is_noted(tmp_path):
    d = tmp_path / "d.csv"
    d.write_text("category,E1,E2\nX,1,2\nY,2,1\n")
    report = run(paper_config(decision=d, weights=(0.5, 0.5)))
    assert any("do not match cluster codes" in n for n in report.provenance)


def test_sensitivity_zero_radius(decision, paper_weights):
    rep = sensitivity(decision, paper_weights, 0.0, 10, 1)
    assert rep.top_rank_frequency["C3"] == 1.0
    assert all(v == 0 for v in rep.reversal_frequency.values())
    assert np.all(rep.sample_weights == paper_weights.weights)


def test_sensitivity_deterministic(decision, paper_weights):
    a = sensitivity(decision, paper_weights, 0.1, 1000, 42)
    b = sensitivity(decision, paper_weights, 0.1, 1000, 42)
    assert a == b
    assert np.array_equal(a.sample_weights, b.sample_weights)
    assert 0 < a.top_rank_frequency["C3"] <= 1


def test_sensitivity_samples_stay_in_region(decision, paper_weights):
    rep = sensitivity(decision, paper_weights, 0.1, 300, 7)
    w = rep.sample_weights
    assert np.all(w >= 0)
    np.testing.assert_allclose(w.sum(axis=1), 1, atol=1e-12)
    assert np.all(np.abs(w - paper_weights.weights).sum(axis=1) <= 0.1 + 1e-12)


def test_sensitivity_sample_is_independent_of_count(decision, paper_weights):
    a = sensitivity(decision, paper_weights, 0.2, 3, 5)
    b = sensitivity(decision, paper_weights, 0.2, 10, 5)
    assert np.array_equal(a.sample_weights, b.sample_weights[:3])


def test_sensitivity_single_sample(decision, paper_weights):
    rep = sensitivity(decision, paper_weights, 0.3, 1, 99)
    assert len(rep.sample_rankings) == 1


def test_sensitivity_argument_checks(decision, paper_weights):
    with pytest.raises(ValueError):
        sensitivity(decision, paper_weights, 1.5, 10, 0)
    with pytest.raises(ValueError):
        sensitivity(decision, paper_weights, 0.1, 0, 0)


def test_sensitivity_infeasible_region(decision):
    with pytest.raises(SensitivityError, match="empty"):
        sensitivity(decision, [0.5, 0.6, 0.2], 0.05, 1, 0)


def test_sensitivity_tiny_radius_still_samples(decision, paper_weights):
    rep = sensitivity(decision, paper_weights, 1e-9, 5, 0)
    assert rep.top_rank_frequency["C3"] == 1.0


def test_sensitivity_config_in_pipeline():
    report = run(paper_config(sensitivity=SensitivityConfig(samples=20, radius=0.05, seed=3)))
    assert report.sensitivity.samples == 20


def test_reproduce_is_deterministic():
    assert emit_report(reproduce(), "json") == emit_report(reproduce(), "json")
    assert emit_report(reproduce(), "markdown") == emit_report(reproduce(), "markdown")


def test_reproduce_checks_pass():
    report = reproduce()
    failed = [c for c in report.checks if not c.passed]
    assert not failed, failed
