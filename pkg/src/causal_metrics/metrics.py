"""Metric catalogue for causal-metrics.

Maps every metric name accepted on the command line to the function that
computes it and to the direction in which the metric improves.
"""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from causal_metrics import effect, structure
from causal_metrics.errors import UnknownMetricError
from causal_metrics.graph import CausalGraph
from causal_metrics.schema import GraphKind, Interval


class MetricOptions(BaseModel):
    """Knobs forwarded to metrics that enumerate or parallelise."""

    model_config = ConfigDict(frozen=True)

    jobs: int = Field(default=1, ge=1)
    mec_limit: int = Field(default=16, ge=0)


RawValue = int | Fraction | Interval
Compute = Callable[[CausalGraph, CausalGraph, MetricOptions], RawValue]


class MetricSpec(BaseModel):
    """One entry of the catalogue."""

    model_config = ConfigDict(frozen=True)

    name: str
    description: str
    better: Literal["min", "max"]
    compute: Compute


def _rate(attribute: str) -> Compute:
    def compute(truth: CausalGraph, pred: CausalGraph, options: MetricOptions) -> RawValue:
        return getattr(structure.classification_metrics(truth, pred), attribute)  # type: ignore[no-any-return]

    return compute


def _preset(name: str) -> Compute:
    def compute(truth: CausalGraph, pred: CausalGraph, options: MetricOptions) -> RawValue:
        return structure.se_preset(name, truth, pred)

    return compute


def _sid(truth: CausalGraph, pred: CausalGraph, options: MetricOptions) -> RawValue:
    if pred.kind is GraphKind.CPDAG:
        return effect.sid_range(truth, pred, limit=options.mec_limit, jobs=options.jobs)
    return effect.sid(truth, pred, jobs=options.jobs)


_PRESET_DESCRIPTIONS = {
    "shd": "Structural Hamming distance, FA + FD + FR",
    "dshd": "SHD counting reversals twice, FA + FD + 2 FR",
    "hd": "Hamming distance, FA + FD + 2 FR",
    "edit-distance": "Graph edit distance, FA + FD + FR",
    "reversed-edges": "Number of reversed edges",
    "mre": "Mean reconstruction error, (FA + FD + 2 FR) / n^2",
    "relerr": "Relative error, FA + FD + 2 FR",
}

_RATE_DESCRIPTIONS = {
    "f1": "F1 score over ordered node pairs",
    "tpr": "True positive rate (recall)",
    "fpr": "False positive rate",
    "precision": "Precision over ordered node pairs",
    "fdr": "False discovery rate",
    "accuracy": "Accuracy over ordered node pairs",
}


def get_metrics() -> list[MetricSpec]:
    """Return every metric the command line accepts, in catalogue order."""

    specs = [
        MetricSpec(
            name=name,
            description=description,
            better="min",
            compute=_preset(name),
        )
        for name, description in _PRESET_DESCRIPTIONS.items()
    ]
    specs += [
        MetricSpec(
            name="shd-c",
            description="SHD between the CPDAGs of truth and prediction",
            better="min",
            compute=lambda truth, pred, options: structure.shd_c(truth, pred),
        ),
        MetricSpec(
            name="csd",
            description="Causal structure distance, L1 between adjacency matrices",
            better="min",
            compute=lambda truth, pred, options: structure.csd(truth, pred),
        ),
    ]
    specs += [
        MetricSpec(
            name=name,
            description=description,
            better="min" if name in {"fpr", "fdr"} else "max",
            compute=_rate(name),
        )
        for name, description in _RATE_DESCRIPTIONS.items()
    ]
    specs += [
        MetricSpec(
            name="kd",
            description="Reachability distance, L1 between reachability matrices",
            better="min",
            compute=lambda truth, pred, options: effect.kd(truth, pred),
        ),
        MetricSpec(
            name="cbc",
            description="Share of truth-adjacent pairs with correct reachability",
            better="max",
            compute=lambda truth, pred, options: effect.cbc(truth, pred),
        ),
        MetricSpec(
            name="sid",
            description="Structural intervention distance; a range for CPDAG predictions",
            better="min",
            compute=_sid,
        ),
        MetricSpec(
            name="ced",
            description="Causal effect distance, KD plus invalid adjustments on agreeing pairs",
            better="min",
            compute=lambda truth, pred, options: effect.ced(truth, pred, jobs=options.jobs),
        ),
    ]
    return specs


_CATALOGUE = {spec.name: spec for spec in get_metrics()}

METRIC_NAMES: tuple[str, ...] = tuple(_CATALOGUE)


def get_metric(name: str) -> MetricSpec:
    try:
        return _CATALOGUE[name]
    except KeyError:
        raise UnknownMetricError(name) from None


def parse_metric_list(text: str) -> list[MetricSpec]:
    """Resolve a comma-separated list of metric names, keeping order and dropping repeats."""
    names = list(dict.fromkeys(name.strip().lower() for name in text.split(",") if name.strip()))
    if not names:
        raise UnknownMetricError("")
    return [get_metric(name) for name in names]
