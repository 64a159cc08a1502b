"""Tests for the metric evaluation service."""

import logging
from fractions import Fraction
from pathlib import Path

import pytest

from causal_metrics.cpdag import dag_to_cpdag
from causal_metrics.dataset import load_manifest
from causal_metrics.errors import GraphFormatError
from causal_metrics.evaluator import MetricEvaluator, to_report_value
from causal_metrics.graph import CausalGraph
from causal_metrics.metrics import parse_metric_list
from causal_metrics.schema import Interval, NotApplicable
from causal_metrics.settings import Settings
from causal_metrics.test.graphs import CHAIN3, COLLIDER, DROP, UND3

logger = logging.getLogger("causal_metrics_tests")


def test_report_values() -> None:
    """Whole fractions become ints, others floats; intervals pass through."""
    assert to_report_value(Fraction(4, 2)) == 2
    assert isinstance(to_report_value(Fraction(4, 2)), int)
    assert to_report_value(Fraction(1, 4)) == 0.25
    assert to_report_value(3) == 3
    assert to_report_value(Interval(lo=0, hi=6)) == Interval(lo=0, hi=6)


def test_evaluate_pair(config: Settings) -> None:
    """Requested metrics appear in order with a timing each."""
    evaluator = MetricEvaluator(config)

    report = evaluator.evaluate(CHAIN3, DROP, parse_metric_list("shd,ced,mre,cbc"))

    assert list(report.metrics) == ["shd", "ced", "mre", "cbc"]
    assert report.metrics["shd"] == 1
    assert report.metrics["ced"] == 4
    assert report.metrics["mre"] == pytest.approx(1 / 9)
    assert report.metrics["cbc"] == 0.75
    assert set(report.elapsed_ms) == set(report.metrics)
    assert report.n == 3
    assert report.version == config.version
    assert not report.has_na


def test_undefined_metric_is_not_applicable(config: Settings) -> None:
    """A metric refusing its inputs does not abort the report."""
    evaluator = MetricEvaluator(config)

    report = evaluator.evaluate(CHAIN3, UND3, parse_metric_list("shd,csd,sid"))

    assert report.metrics["shd"] == NotApplicable(na="undirected edge present; use csd for CPDAGs")
    assert report.metrics["csd"] == 2
    assert report.metrics["sid"] == Interval(lo=0, hi=6)
    assert report.has_na


def test_converted_prediction_gets_interval(config: Settings) -> None:
    """A CPDAG produced by conversion is scored with a SID interval."""
    evaluator = MetricEvaluator(config)

    report = evaluator.evaluate(COLLIDER, dag_to_cpdag(COLLIDER), parse_metric_list("sid,ced"))

    assert report.metrics == {"sid": Interval(lo=0, hi=0), "ced": 0}
    assert not report.has_na


def test_small_mec_limit_is_not_applicable() -> None:
    """The enumeration limit from settings reaches the SID range."""
    evaluator = MetricEvaluator(Settings(jobs=1, mec_limit=1))

    report = evaluator.evaluate(CHAIN3, UND3, parse_metric_list("sid"))

    assert isinstance(report.metrics["sid"], NotApplicable)


def test_evaluate_aligns_labels(config: Settings) -> None:
    """Labelled predictions are compared node by node, not column by column."""
    truth = CausalGraph.from_edges(3, directed=[(0, 1), (1, 2)], labels=["a", "b", "c"])
    pred = CausalGraph.from_edges(3, directed=[(1, 2), (2, 0)], labels=["c", "a", "b"])

    report = MetricEvaluator(config).evaluate(truth, pred, parse_metric_list("csd"))

    assert report.metrics["csd"] == 0


def test_evaluate_files(config: Settings, graph_files: dict[str, Path]) -> None:
    """Files in either format are read and compared."""
    report = MetricEvaluator(config).evaluate_files(
        graph_files["chain.csv"], graph_files["rev23.txt"], parse_metric_list("shd,sid")
    )

    assert report.metrics == {"shd": 1, "sid": 3}
    assert report.truth.endswith("chain.csv")


def test_evaluate_files_rejects_bad_input(config: Settings, tmp_path: Path) -> None:
    """Parse errors propagate from single-pair evaluation."""
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n0,2\n", encoding="utf-8")

    with pytest.raises(GraphFormatError):
        MetricEvaluator(config).evaluate_files(bad, bad, parse_metric_list("csd"))


@pytest.mark.asyncio
async def test_evaluate_dataset(dataset_dir: Path) -> None:
    """Every prediction yields a row in manifest order; failures are kept as errors."""
    manifest = load_manifest(dataset_dir)
    evaluator = MetricEvaluator(Settings(jobs=2))

    rows = await evaluator.evaluate_dataset(manifest, parse_metric_list("csd,ced,shd"))

    assert [row.model for row in rows] == ["drop", "rev23", "pc", "missing"]
    drop, rev23, pc, missing = rows
    assert drop.report is not None and drop.report.metrics == {"csd": 1, "ced": 4, "shd": 1}
    assert rev23.report is not None and rev23.report.metrics["ced"] == 4
    assert pc.report is not None and isinstance(pc.report.metrics["shd"], NotApplicable)
    assert missing.report is None
    assert missing.error is not None and "missing.csv" in missing.error
    logger.info(f"Dataset rows: {[row.model_dump(exclude_none=True) for row in rows]}")
