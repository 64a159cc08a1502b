"""Type definitions for causal-metrics.

This module defines the Pydantic models exchanged between the metric modules,
the evaluator service and the command line.
"""

from __future__ import annotations

from enum import StrEnum
from fractions import Fraction
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, model_validator


class GraphKind(StrEnum):
    """Claimed class of a causal graph."""

    DAG = "DAG"
    CPDAG = "CPDAG"
    DIGRAPH = "Digraph"


class FailureReason(StrEnum):
    """Outcome of an adjustment-set test: the first failed check, in evaluation order."""

    NONE = "none"
    OPENED_COLLIDER_PATH = "opened_collider_path"
    UNBLOCKED_CONFOUNDING_PATH = "unblocked_confounding_path"
    DESCENDANT_IN_Z = "descendant_in_z"
    # prediction asserts no effect of i on j, the truth has one
    ZERO_EFFECT_MISMATCH = "zero_effect_mismatch"


class BaseMetricsModel(BaseModel):
    """Base class for all value models: immutable and strict about fields."""

    model_config = {
        "extra": "forbid",
        "frozen": True,
    }


#####################################################################
### Structure-error counts                                        ###
#####################################################################


def _ratio(numerator: int, denominator: int) -> Fraction:
    if denominator == 0:
        return Fraction(0)
    return Fraction(numerator, denominator)


class EditCounts(BaseMetricsModel):
    """Falsely added / deleted / reversed edges between two DAGs."""

    fa: int = Field(..., ge=0, description="Edges present only in the prediction")
    fd: int = Field(..., ge=0, description="Edges present only in the truth")
    fr: int = Field(..., ge=0, description="Edges present in both with opposite direction")

    @property
    def total(self) -> int:
        return self.fa + self.fd + self.fr


class ClassificationCounts(BaseMetricsModel):
    """Confusion counts over ordered node pairs, edges as the positive class."""

    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)

    @property
    def precision(self) -> Fraction:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def tpr(self) -> Fraction:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def fpr(self) -> Fraction:
        return _ratio(self.fp, self.fp + self.tn)

    @property
    def fdr(self) -> Fraction:
        return _ratio(self.fp, self.tp + self.fp)

    @property
    def accuracy(self) -> Fraction:
        return _ratio(self.tp + self.tn, self.tp + self.fp + self.fn + self.tn)

    @property
    def f1(self) -> Fraction:
        return _ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn)


#####################################################################
### Causal-effect checks                                          ###
#####################################################################


class AdjustmentCheck(BaseMetricsModel):
    """Verdict of testing a candidate adjustment set Z for the pair (i, j)."""

    pair: tuple[int, int] = Field(..., description="Ordered pair (cause i, effect j)")
    z: tuple[int, ...] = Field(..., description="Sorted candidate adjustment set")
    verdict: bool = Field(..., description="True when Z is valid in the truth graph")
    failure: FailureReason = Field(default=FailureReason.NONE)

    @model_validator(mode="after")
    def verdict_matches_failure(self) -> AdjustmentCheck:
        if self.verdict != (self.failure is FailureReason.NONE):
            raise ValueError("verdict must be true exactly when failure is 'none'")
        return self


#####################################################################
### Report values                                                 ###
#####################################################################


class Interval(BaseMetricsModel):
    """Closed score range, used for SID over a Markov equivalence class."""

    lo: int
    hi: int

    @model_validator(mode="after")
    def ordered(self) -> Interval:
        if self.lo > self.hi:
            raise ValueError(f"interval bounds out of order: [{self.lo}, {self.hi}]")
        return self

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


class NotApplicable(BaseMetricsModel):
    """Marker for a metric that is undefined on the given inputs."""

    na: str = Field(..., description="Reason the metric could not be computed")

    def __str__(self) -> str:
        return f"n/a: {self.na}"


MetricValue = int | float | Interval | NotApplicable


class MetricReport(BaseMetricsModel):
    """Metric values for one (truth, prediction) pair."""

    truth: str = Field(..., description="Ground-truth graph file")
    pred: str = Field(..., description="Predicted graph file")
    n: int = Field(..., ge=1, description="Number of nodes")
    metrics: dict[str, MetricValue] = Field(default_factory=dict)
    elapsed_ms: dict[str, float] = Field(default_factory=dict)
    version: str

    @property
    def has_na(self) -> bool:
        return any(isinstance(value, NotApplicable) for value in self.metrics.values())


class DatasetRow(BaseMetricsModel):
    """One prediction of a dataset: either a report or the reason it failed."""

    model: str
    report: MetricReport | None = None
    error: str | None = None


#####################################################################
### Dataset manifest and benchmark rows                           ###
#####################################################################


class PredictionEntry(BaseMetricsModel):
    """A predicted graph produced by one causal discovery model."""

    model: str = Field(..., min_length=1, description="Name of the discovery model")
    path: str = Field(..., min_length=1, description="Adjacency CSV, relative to the dataset root")


class DatasetManifest(BaseMetricsModel):
    """Contents of ``manifest.json`` in a dataset directory."""

    name: str = Field(..., min_length=1)
    category: Literal["static", "multi_time_series", "event_sequence"]
    graph: str = Field(..., min_length=1, description="Ground-truth adjacency CSV")
    predictions: list[PredictionEntry] = Field(default_factory=list)
    root: Path = Field(default=Path("."), exclude=True)

    @property
    def graph_path(self) -> Path:
        return self.root / self.graph

    def prediction_path(self, entry: PredictionEntry) -> Path:
        return self.root / entry.path


class BenchRow(BaseMetricsModel):
    """One timed CED evaluation of the scalability benchmark."""

    n: int
    seed: int
    edges: int
    ced: int
    elapsed_ms: float


__all__ = [
    "AdjustmentCheck",
    "BaseMetricsModel",
    "BenchRow",
    "ClassificationCounts",
    "DatasetManifest",
    "DatasetRow",
    "EditCounts",
    "FailureReason",
    "GraphKind",
    "Interval",
    "MetricReport",
    "MetricValue",
    "NotApplicable",
    "PredictionEntry",
]
