"""Metric evaluation service.

Runs a list of catalogue metrics over a (truth, prediction) pair or over every
prediction of a dataset and collects the results into reports.
"""

from __future__ import annotations

import logging
import time
from fractions import Fraction
from pathlib import Path

import anyio
import anyio.to_thread

from causal_metrics.errors import CausalMetricsError, UnsupportedGraphError
from causal_metrics.graph import CausalGraph, align
from causal_metrics.io import read_graph
from causal_metrics.metrics import MetricOptions, MetricSpec, RawValue
from causal_metrics.schema import (
    DatasetManifest,
    DatasetRow,
    Interval,
    MetricReport,
    MetricValue,
    NotApplicable,
    PredictionEntry,
)
from causal_metrics.settings import Settings, settings

logger = logging.getLogger("causal_metrics.evaluator")


def to_report_value(value: RawValue) -> MetricValue:
    """Exact fractions become ints when whole and floats otherwise."""
    if isinstance(value, Interval):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else float(value)
    return int(value)


def _reason(exc: CausalMetricsError) -> str:
    if isinstance(exc, UnsupportedGraphError):
        return exc.reason
    return str(exc)


class MetricEvaluator:
    """Service computing catalogue metrics into ``MetricReport`` values."""

    def __init__(self, config: Settings | None = None) -> None:
        """Initialize the evaluator.

        Args:
            config: Runtime settings; the module-level defaults when omitted
        """
        self.config = config or settings
        self.options = MetricOptions(jobs=self.config.jobs, mec_limit=self.config.mec_limit)

    def evaluate(
        self,
        truth: CausalGraph,
        pred: CausalGraph,
        metrics: list[MetricSpec],
        truth_name: str = "truth",
        pred_name: str = "pred",
    ) -> MetricReport:
        """Compute ``metrics`` for one aligned pair of graphs.

        A metric that is undefined for the inputs yields ``NotApplicable``
        instead of aborting the report.
        """
        truth, pred = align(truth, pred)
        values: dict[str, MetricValue] = {}
        elapsed: dict[str, float] = {}
        for spec in metrics:
            started = time.perf_counter()
            try:
                values[spec.name] = to_report_value(spec.compute(truth, pred, self.options))
            except CausalMetricsError as exc:
                logger.warning(f"Metric {spec.name} not applicable to {pred_name}: {exc}")
                values[spec.name] = NotApplicable(na=_reason(exc))
            elapsed[spec.name] = (time.perf_counter() - started) * 1000.0
            logger.debug(f"Metric {spec.name} = {values[spec.name]}")

        return MetricReport(
            truth=truth_name,
            pred=pred_name,
            n=truth.n,
            metrics=values,
            elapsed_ms=elapsed,
            version=self.config.version,
        )

    def evaluate_files(
        self, truth_path: Path | str, pred_path: Path | str, metrics: list[MetricSpec]
    ) -> MetricReport:
        truth = read_graph(truth_path)
        pred = read_graph(pred_path)
        return self.evaluate(truth, pred, metrics, str(truth_path), str(pred_path))

    def _evaluate_entry(
        self,
        manifest: DatasetManifest,
        truth: CausalGraph,
        entry: PredictionEntry,
        metrics: list[MetricSpec],
    ) -> DatasetRow:
        path = manifest.prediction_path(entry)
        try:
            pred = read_graph(path)
            report = self.evaluate(truth, pred, metrics, str(manifest.graph_path), str(path))
        except (CausalMetricsError, OSError) as exc:
            logger.error(f"Prediction {entry.model} failed: {exc}", exc_info=self.config.debug)
            return DatasetRow(model=entry.model, error=str(exc))
        logger.info(f"Evaluated prediction {entry.model}")
        return DatasetRow(model=entry.model, report=report)

    async def evaluate_dataset(
        self, manifest: DatasetManifest, metrics: list[MetricSpec]
    ) -> list[DatasetRow]:
        """Evaluate every prediction of a dataset.

        Rows run on worker threads, at most ``jobs`` at a time, and come back in
        manifest order.

        Raises:
            CausalMetricsError: If the ground-truth graph cannot be read
        """
        truth = read_graph(manifest.graph_path)
        rows: list[DatasetRow | None] = [None] * len(manifest.predictions)
        limiter = anyio.CapacityLimiter(self.config.jobs)

        async def run(index: int, entry: PredictionEntry) -> None:
            rows[index] = await anyio.to_thread.run_sync(
                self._evaluate_entry, manifest, truth, entry, metrics, limiter=limiter
            )

        async with anyio.create_task_group() as tg:
            for index, entry in enumerate(manifest.predictions):
                tg.start_soon(run, index, entry)

        return [row for row in rows if row is not None]
