"""Structure-error metrics.

Every metric here compares adjacency matrices directly: CSD, the weighted
edit-count family (SHD and its variants), SHD on CPDAGs and the confusion
counts over ordered node pairs.
"""

import logging
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict

from causal_metrics.cpdag import dag_to_cpdag
from causal_metrics.errors import UnsupportedGraphError
from causal_metrics.graph import CausalGraph, require_same_nodes
from causal_metrics.schema import ClassificationCounts, EditCounts, GraphKind

logger = logging.getLogger("causal_metrics.structure")

Weight = int | Fraction


def _require_oriented(metric: str, *graphs: CausalGraph) -> None:
    for g in graphs:
        if np.any(g.adj & g.adj.T):
            raise UnsupportedGraphError(metric, "undirected edge present; use csd for CPDAGs")


def csd(truth: CausalGraph, pred: CausalGraph) -> int:
    """Entrywise L1 distance between the adjacency matrices."""
    require_same_nodes(truth, pred)
    return int(np.count_nonzero(truth.adj != pred.adj))


def edit_counts(truth: CausalGraph, pred: CausalGraph) -> EditCounts:
    """Falsely added, deleted and reversed edges over unordered node pairs."""
    require_same_nodes(truth, pred)
    _require_oriented("edit_counts", truth, pred)

    t = np.asarray(truth.adj)
    p = np.asarray(pred.adj)
    t_pairs = np.triu(t | t.T, k=1)
    p_pairs = np.triu(p | p.T, k=1)
    return EditCounts(
        fa=int(np.count_nonzero(p_pairs & ~t_pairs)),
        fd=int(np.count_nonzero(t_pairs & ~p_pairs)),
        fr=int(np.count_nonzero(t & p.T)),
    )


def se_like(
    truth: CausalGraph, pred: CausalGraph, alpha: Weight, beta: Weight, gamma: Weight
) -> Fraction:
    """Weighted edit count ``alpha * FA + beta * FD + gamma * FR``."""
    counts = edit_counts(truth, pred)
    return Fraction(alpha) * counts.fa + Fraction(beta) * counts.fd + Fraction(gamma) * counts.fr


class SEPreset(BaseModel):
    """Named weighting of the edit counts."""

    model_config = ConfigDict(frozen=True)

    alpha: int
    beta: int
    gamma: int
    per_node_squared: bool = False

    def weights(self, n: int) -> tuple[Fraction, Fraction, Fraction]:
        scale = Fraction(1, n * n) if self.per_node_squared else Fraction(1)
        return (self.alpha * scale, self.beta * scale, self.gamma * scale)


SE_PRESETS: dict[str, SEPreset] = {
    "shd": SEPreset(alpha=1, beta=1, gamma=1),
    "dshd": SEPreset(alpha=1, beta=1, gamma=2),
    "hd": SEPreset(alpha=1, beta=1, gamma=2),
    "edit-distance": SEPreset(alpha=1, beta=1, gamma=1),
    "reversed-edges": SEPreset(alpha=0, beta=0, gamma=1),
    "mre": SEPreset(alpha=1, beta=1, gamma=2, per_node_squared=True),
    "relerr": SEPreset(alpha=1, beta=1, gamma=2),
}


def se_preset(name: str, truth: CausalGraph, pred: CausalGraph) -> Fraction:
    try:
        preset = SE_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown structure-error preset {name!r}") from None
    return se_like(truth, pred, *preset.weights(truth.n))


def shd(truth: CausalGraph, pred: CausalGraph) -> int:
    return int(se_preset("shd", truth, pred))


def dshd(truth: CausalGraph, pred: CausalGraph) -> int:
    return int(se_preset("dshd", truth, pred))


def mre(truth: CausalGraph, pred: CausalGraph) -> Fraction:
    return se_preset("mre", truth, pred)


def _as_cpdag(g: CausalGraph) -> CausalGraph:
    if g.kind is GraphKind.DAG:
        return dag_to_cpdag(g)
    if g.kind is GraphKind.CPDAG:
        return g
    raise UnsupportedGraphError("shd-c", "cyclic input has no CPDAG")


def shd_c(truth: CausalGraph, pred: CausalGraph) -> int:
    """SHD between CPDAGs; DAG inputs are converted first.

    A node pair counts once when its edge marks differ in any way.
    """
    require_same_nodes(truth, pred)
    a = _as_cpdag(truth).adj
    b = _as_cpdag(pred).adj
    differ = a != b
    return int(np.count_nonzero(np.triu(differ | differ.T, k=1)))


def classification_metrics(truth: CausalGraph, pred: CausalGraph) -> ClassificationCounts:
    """Confusion counts over ordered pairs; FP = FA + FR and FN = FD + FR."""
    counts = edit_counts(truth, pred)
    tp = int(np.count_nonzero(truth.adj & pred.adj))
    fp = counts.fa + counts.fr
    fn = counts.fd + counts.fr
    n = truth.n
    return ClassificationCounts(tp=tp, fp=fp, fn=fn, tn=n * (n - 1) - tp - fp - fn)
