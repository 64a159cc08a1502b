"""Causal-effect metrics.

CED, SID, SID ranges, KD and CBC all rest on one question asked per ordered
pair ``(i, j)``: does the adjustment set implied by the predicted graph,
``Z = P_i(pred) \\ {j}``, remain valid for the effect of ``i`` on ``j`` in the
true graph? Validity is decided by three reachability checks run in a fixed
order:

1. collider opening: after adding ``z -> PA(z)`` for every ``z`` in ``Z`` and
   dropping the out-edges of ``j``, no ``z`` may lie on an ``i ~> z ~> j`` route;
2. confounding: with ``Z`` and the out-edges of ``i`` removed, no node may reach
   both ``i`` and ``j`` (the reflexive diagonal lets ``k = j`` flag ``j ~> i``);
3. mediation: with the out-edges of ``j`` removed, no ``z`` may be a descendant
   of an intermediate node of a directed ``i ~> j`` path.

When ``j`` is a predicted parent of ``i`` and the prediction has no directed
path ``i ~> j``, the prediction asserts a zero effect; that pair is wrong
exactly when the truth has a directed path ``i ~> j``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict

from causal_metrics.cpdag import enumerate_mec
from causal_metrics.errors import UnsupportedGraphError
from causal_metrics.graph import (
    BoolMatrix,
    CausalGraph,
    NodeSet,
    closure,
    reachability,
    require_same_nodes,
    skeleton,
)
from causal_metrics.schema import AdjustmentCheck, FailureReason, GraphKind, Interval
from causal_metrics.settings import settings

logger = logging.getLogger("causal_metrics.effect")


def parents_in(g: CausalGraph, i: int) -> NodeSet:
    """Nodes with an edge into ``i``, undirected neighbours included."""
    return frozenset(int(z) for z in np.flatnonzero(g.adj[:, i]))


#####################################################################
### Single-pair check                                             ###
#####################################################################


class ControlledReach(BaseModel):
    """The three reachability matrices behind one adjustment check."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t_reach: np.ndarray
    h_reach: np.ndarray
    m_reach: np.ndarray


def _open_colliders(adj: BoolMatrix, z: Iterable[int]) -> BoolMatrix:
    """Add ``z -> PA(z)`` for each ``z`` in ascending order, reading parents from the growing matrix."""
    h = np.array(adj, dtype=bool, copy=True)
    for node in sorted(z):
        h[node, np.flatnonzero(h[:, node])] = True
    return h


def _controlled(
    adj: BoolMatrix, i: int, j: int, members: list[int], avoiding_j: BoolMatrix | None = None
) -> ControlledReach:
    h = _open_colliders(adj, members)
    h[j, :] = False

    t = adj.copy()
    t[:, members] = False
    t[members, :] = False
    t[i, :] = False

    m_reach = _avoiding_closure(adj, j) if avoiding_j is None else avoiding_j.copy()
    m_reach[i, i] = False
    m_reach[j, j] = False

    return ControlledReach(t_reach=closure(t), h_reach=closure(h), m_reach=m_reach)


def controlled_reach(truth: CausalGraph, i: int, j: int, z: Iterable[int]) -> ControlledReach:
    return _controlled(np.asarray(truth.adj), i, j, sorted(z))


def _first_failure(reach: ControlledReach, i: int, j: int, members: list[int]) -> FailureReason:
    h, t, m = reach.h_reach, reach.t_reach, reach.m_reach
    if members and np.any(h[i, members] & h[members, j]):
        return FailureReason.OPENED_COLLIDER_PATH
    if np.any(t[:, i] & t[:, j]):
        return FailureReason.UNBLOCKED_CONFOUNDING_PATH
    if members and np.any(m[i, :, None] & m[:, j, None] & m[:, members]):
        return FailureReason.DESCENDANT_IN_Z
    return FailureReason.NONE


def _check_nodes(g: CausalGraph, *nodes: int) -> None:
    for node in nodes:
        if not 0 <= node < g.n:
            raise ValueError(f"node index {node} out of range for {g.n} nodes")


def adjustment_valid(truth: CausalGraph, i: int, j: int, z: Iterable[int]) -> AdjustmentCheck:
    """Test whether ``z`` is a valid adjustment set for the effect of ``i`` on ``j``.

    Args:
        truth: Graph the set is tested against
        i: Cause node index
        j: Effect node index
        z: Candidate adjustment set; must contain neither ``i`` nor ``j``

    Returns:
        The verdict and the first failed check, in collider / confounding /
        mediation order
    """
    members = sorted({int(node) for node in z})
    _check_nodes(truth, i, j, *members)
    if i == j:
        raise ValueError("adjustment is defined for distinct nodes only")
    if j in members or i in members:
        raise ValueError(f"adjustment set {members} contains an endpoint of ({i}, {j})")

    failure = _first_failure(controlled_reach(truth, i, j, members), i, j, members)
    logger.debug(f"Pair ({i}, {j}) with Z={members}: {failure.value}")
    return AdjustmentCheck(
        pair=(i, j), z=tuple(members), verdict=failure is FailureReason.NONE, failure=failure
    )


def predicted_adjustment(truth: CausalGraph, pred: CausalGraph, i: int, j: int) -> AdjustmentCheck:
    """Check the adjustment for ``(i, j)`` that ``pred`` implies, against ``truth``."""
    require_same_nodes(truth, pred)
    _check_nodes(truth, i, j)
    parents = parents_in(pred, i)
    if j in parents and not reachability(pred).reach[i, j]:
        missed = bool(reachability(truth).reach[i, j])
        return AdjustmentCheck(
            pair=(i, j),
            z=(),
            verdict=not missed,
            failure=FailureReason.ZERO_EFFECT_MISMATCH if missed else FailureReason.NONE,
        )
    return adjustment_valid(truth, i, j, parents - {j})


#####################################################################
### All pairs                                                     ###
#####################################################################


def _avoiding_closure(adj: BoolMatrix, j: int) -> BoolMatrix:
    cut = adj.copy()
    cut[j, :] = False
    return closure(cut)


@dataclass(frozen=True)
class _PairContext:
    truth_adj: BoolMatrix
    pred_adj: BoolMatrix
    truth_reach: BoolMatrix
    pred_reach: BoolMatrix
    restrict: bool
    # avoiding[j] is the closure of the truth with the out-edges of j removed
    avoiding: BoolMatrix

    @property
    def n(self) -> int:
        return int(self.truth_adj.shape[0])


def _batched_failures(ctx: _PairContext, i: int, parents: np.ndarray, batch: np.ndarray) -> BoolMatrix:
    """Failure flags for every ``j`` in ``batch``, all sharing ``Z = parents``."""
    adj = ctx.truth_adj
    n = ctx.n

    t = adj.copy()
    t[:, parents] = False
    t[parents, :] = False
    t[i, :] = False
    t_reach = closure(t).astype(np.float32)
    failed = (t_reach[:, i] @ t_reach) > 0
    if parents.size == 0:
        return failed

    h = _open_colliders(adj, parents.tolist())
    h_reach = closure(h)
    # dropping the out-edges of j only clears bits, so this is a superset
    suspect = (h_reach[i, parents].astype(np.float32) @ h_reach[parents, :].astype(np.float32)) > 0
    pending = np.flatnonzero(batch & suspect & ~failed)
    if pending.size:
        rows = np.arange(pending.size)
        frontier = np.zeros((pending.size, n), dtype=bool)
        frontier[:, i] = True
        h_float = h.astype(np.float32)
        while True:
            expand = frontier.copy()
            expand[rows, pending] = False
            grown = frontier | ((expand.astype(np.float32) @ h_float) > 0)
            if np.array_equal(grown, frontier):
                break
            frontier = grown
        opened = (frontier[:, parents] & h_reach[np.ix_(parents, pending)].T).any(axis=1)
        failed[pending] |= opened

    pending = np.flatnonzero(batch & ~failed)
    if pending.size:
        rows = np.arange(pending.size)
        stack = ctx.avoiding[pending]
        from_i = stack[:, i, :]
        into_j = ctx.avoiding[pending, :, pending]
        above_z = stack[:, :, parents].any(axis=2)
        through = from_i & into_j & above_z
        through[:, i] = False
        through[rows, pending] = False
        failed[pending] |= through.any(axis=1)
    return failed


def _invalid_row(ctx: _PairContext, i: int) -> BoolMatrix:
    n = ctx.n
    invalid = np.zeros(n, dtype=bool)
    candidates = np.ones(n, dtype=bool)
    candidates[i] = False
    if ctx.restrict:
        candidates &= ctx.truth_reach[i] == ctx.pred_reach[i]
    if not candidates.any():
        return invalid

    is_parent = ctx.pred_adj[:, i]
    parents = np.flatnonzero(is_parent)

    zero_effect = candidates & is_parent & ~ctx.pred_reach[i]
    invalid[zero_effect] = ctx.truth_reach[i, zero_effect]

    for j in np.flatnonzero(candidates & is_parent & ctx.pred_reach[i]):
        members = [int(z) for z in parents if z != j]
        reach = _controlled(ctx.truth_adj, i, int(j), members, avoiding_j=ctx.avoiding[j])
        invalid[j] = _first_failure(reach, i, int(j), members) is not FailureReason.NONE

    batch = candidates & ~is_parent
    if batch.any():
        invalid[batch] = _batched_failures(ctx, i, parents, batch)[batch]
    return invalid


def _resolve_jobs(jobs: int | None) -> int:
    return max(1, settings.jobs if jobs is None else jobs)


def pair_verdicts(
    truth: CausalGraph,
    pred: CausalGraph,
    restrict_to_agreeing: bool = True,
    jobs: int | None = None,
) -> BoolMatrix:
    """Flag every ordered pair whose predicted adjustment is invalid in ``truth``.

    With ``restrict_to_agreeing`` only pairs whose reachability bits agree are
    evaluated; the others stay ``False``. Rows are evaluated on ``jobs``
    threads; the result does not depend on the thread count.
    """
    require_same_nodes(truth, pred)
    truth_adj = np.asarray(truth.adj)
    n = truth.n
    workers = _resolve_jobs(jobs)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        avoiding = np.stack(list(pool.map(lambda j: _avoiding_closure(truth_adj, j), range(n))))
        ctx = _PairContext(
            truth_adj=truth_adj,
            pred_adj=np.asarray(pred.adj),
            truth_reach=reachability(truth).reach,
            pred_reach=reachability(pred).reach,
            restrict=restrict_to_agreeing,
            avoiding=avoiding,
        )
        rows = list(pool.map(lambda i: _invalid_row(ctx, i), range(n)))

    verdicts = np.stack(rows)
    logger.debug(f"Pair checks on {n} nodes: {int(verdicts.sum())} invalid")
    return verdicts


#####################################################################
### Metrics                                                       ###
#####################################################################


def kd(truth: CausalGraph, pred: CausalGraph) -> int:
    """L1 distance between the reachability matrices."""
    require_same_nodes(truth, pred)
    return int(np.count_nonzero(reachability(truth).reach != reachability(pred).reach))


def ce_like(
    truth: CausalGraph,
    pred: CausalGraph,
    alpha: int | Fraction,
    beta: int | Fraction,
    constant: int | Fraction = 0,
    restrict_to_agreeing: bool = True,
    jobs: int | None = None,
) -> Fraction:
    """``constant + alpha * KD + beta * (number of invalid predicted adjustments)``."""
    require_same_nodes(truth, pred)
    score = Fraction(constant)
    if alpha:
        score += Fraction(alpha) * kd(truth, pred)
    if beta:
        invalid = pair_verdicts(truth, pred, restrict_to_agreeing=restrict_to_agreeing, jobs=jobs)
        score += Fraction(beta) * int(invalid.sum())
    return score


def ced(truth: CausalGraph, pred: CausalGraph, jobs: int | None = None) -> int:
    """Causal effect distance: KD plus invalid adjustments over agreeing pairs.

    ``ced(g, g)`` is zero for every DAG ``g``. Undirected edges are read in
    both directions, so when the truth is a CPDAG the edge ``j -> i`` of an
    undirected pair ``i -- j`` is never blocked and both ordered pairs count,
    even against an identical prediction: the undirected chain
    ``a -- b -- c`` scores 6 against itself.
    """
    return int(ce_like(truth, pred, alpha=1, beta=1, jobs=jobs))


def _require_dag(metric: str, g: CausalGraph, role: str, hint: str = "") -> None:
    if g.kind is not GraphKind.DAG:
        raise UnsupportedGraphError(metric, f"{role} is a {g.kind.value}, not a DAG{hint}")


def sid(truth: CausalGraph, pred: CausalGraph, jobs: int | None = None) -> int:
    """Invalid predicted adjustments over all ordered pairs of two DAGs."""
    _require_dag("sid", truth, "truth")
    _require_dag("sid", pred, "prediction", "; use sid_range for CPDAGs")
    return int(ce_like(truth, pred, alpha=0, beta=1, restrict_to_agreeing=False, jobs=jobs))


def sid_range(
    truth: CausalGraph, pred: CausalGraph, limit: int | None = None, jobs: int | None = None
) -> Interval:
    """SID range over every DAG in the equivalence class of ``pred``."""
    _require_dag("sid", truth, "truth")
    if pred.kind is GraphKind.DIGRAPH:
        raise UnsupportedGraphError("sid", "prediction is a cyclic digraph")
    require_same_nodes(truth, pred)
    scores = [sid(truth, member, jobs=jobs) for member in enumerate_mec(pred, limit=limit)]
    logger.debug(f"SID over {len(scores)} class members: {scores}")
    return Interval(lo=min(scores), hi=max(scores))


def cbc(truth: CausalGraph, pred: CausalGraph) -> Fraction:
    """Share of truth-adjacent ordered pairs whose reachability bit is predicted correctly."""
    require_same_nodes(truth, pred)
    mask = skeleton(truth)
    edges = int(mask.sum())
    if edges == 0:
        raise UnsupportedGraphError("cbc", "truth graph has no edges")
    diff = reachability(truth).reach != reachability(pred).reach
    score = 1 - Fraction(int(np.count_nonzero(mask & diff)), edges)
    return min(Fraction(1), max(Fraction(0), score))
