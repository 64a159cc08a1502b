"""Reference oracles built on path enumeration.

These are deliberately slow, literal implementations used to cross-check the
matrix code. They share nothing with it beyond ``CausalGraph`` and rely on
networkx for graph traversal.
"""

from __future__ import annotations

import itertools
import logging
from enum import StrEnum

import networkx as nx
import numpy as np
from pydantic import Field, model_validator

from causal_metrics.errors import NodeMismatchError, OracleBudgetError, UnsupportedGraphError
from causal_metrics.graph import CausalGraph, ReachabilityMatrix
from causal_metrics.schema import BaseMetricsModel, GraphKind
from causal_metrics.settings import settings

logger = logging.getLogger("causal_metrics.oracle")

MAX_SKELETON_EDGES = 16


class EdgeMark(StrEnum):
    FORWARD = "forward"
    BACKWARD = "backward"
    UNDIRECTED = "undirected"


class PathWitness(BaseMetricsModel):
    """A simple path between two nodes, with its edge directions."""

    nodes: tuple[int, ...]
    edge_marks: tuple[EdgeMark, ...]
    blocked_by: int | None = Field(
        default=None, description="Node that blocks the path under the tested set, if any"
    )

    @model_validator(mode="after")
    def simple_path(self) -> PathWitness:
        if len(self.edge_marks) != len(self.nodes) - 1:
            raise ValueError("a path over k nodes has k - 1 edge marks")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path repeats a node")
        return self

    @property
    def is_directed(self) -> bool:
        return all(mark is EdgeMark.FORWARD for mark in self.edge_marks)


def _digraph(g: CausalGraph) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(g.n))
    rows, cols = np.nonzero(g.adj)
    graph.add_edges_from(zip(rows.tolist(), cols.tolist(), strict=True))
    return graph


def _check_budget(*graphs: CausalGraph) -> None:
    for g in graphs:
        if g.n > settings.oracle_max_nodes:
            raise OracleBudgetError(
                f"{g.n} nodes exceed the oracle budget of {settings.oracle_max_nodes}"
            )


def reach_oracle(g: CausalGraph) -> ReachabilityMatrix:
    """Reachability by depth-first search from every node."""
    graph = _digraph(g)
    reach = np.eye(g.n, dtype=bool)
    for node in graph:
        for descendant in nx.descendants(graph, node):
            reach[node, descendant] = True
    return ReachabilityMatrix(reach=reach)


def _marks(graph: nx.DiGraph, path: list[int]) -> tuple[EdgeMark, ...]:
    marks = []
    for a, b in itertools.pairwise(path):
        forward, backward = graph.has_edge(a, b), graph.has_edge(b, a)
        if forward and backward:
            marks.append(EdgeMark.UNDIRECTED)
        elif forward:
            marks.append(EdgeMark.FORWARD)
        else:
            marks.append(EdgeMark.BACKWARD)
    return tuple(marks)


def _blocker(graph: nx.DiGraph, path: list[int], z: frozenset[int]) -> int | None:
    for position in range(1, len(path) - 1):
        before, node, after = path[position - 1], path[position], path[position + 1]
        collider = graph.has_edge(before, node) and graph.has_edge(after, node)
        if collider:
            if node not in z and not (nx.descendants(graph, node) & z):
                return node
        elif node in z:
            return node
    return None


def _require_dag_truth(truth: CausalGraph) -> None:
    if truth.kind is not GraphKind.DAG:
        raise UnsupportedGraphError("oracle", f"truth is a {truth.kind.value}, not a DAG")


def open_noncausal_path(truth: CausalGraph, i: int, j: int, z: frozenset[int]) -> PathWitness | None:
    """First non-directed path between ``i`` and ``j`` that ``z`` leaves open."""
    graph = _digraph(truth)
    for path in nx.all_simple_paths(graph.to_undirected(as_view=True), i, j):
        witness = PathWitness(nodes=tuple(path), edge_marks=_marks(graph, path))
        if witness.is_directed:
            continue
        if _blocker(graph, path, z) is None:
            return witness
    return None


def mediator_in_set(truth: CausalGraph, i: int, j: int, z: frozenset[int]) -> int | None:
    """A member of ``z`` lying on or below an intermediate node of a directed ``i -> j`` path.

    Descendants are taken with the out-edges of ``j`` removed.
    """
    graph = _digraph(truth)
    cut = graph.copy()
    cut.remove_edges_from(list(graph.out_edges(j)))
    for path in nx.all_simple_paths(graph, i, j):
        for node in path[1:-1]:
            hit = ({node} | nx.descendants(cut, node)) & z
            if hit:
                return min(hit)
    return None


def adjustment_valid_oracle(truth: CausalGraph, i: int, j: int, z: frozenset[int] | set[int]) -> bool:
    """Classical validity of ``z`` for the effect of ``i`` on ``j`` in a DAG."""
    _require_dag_truth(truth)
    _check_budget(truth)
    members = frozenset(z)
    if i == j or j in members or i in members:
        raise ValueError("adjustment set must exclude both endpoints of a pair of distinct nodes")
    if mediator_in_set(truth, i, j, members) is not None:
        return False
    return open_noncausal_path(truth, i, j, members) is None


def oracle_pair_invalid(
    truth: CausalGraph,
    pred: CausalGraph,
    i: int,
    j: int,
    truth_reach: ReachabilityMatrix,
    pred_reach: ReachabilityMatrix,
) -> bool:
    parents = frozenset(int(node) for node in range(pred.n) if pred.adj[node, i])
    if j in parents and not pred_reach.reach[i, j]:
        return bool(truth_reach.reach[i, j])
    return not adjustment_valid_oracle(truth, i, j, parents - {j})


def _pairwise(truth: CausalGraph, pred: CausalGraph, restrict: bool) -> tuple[int, int]:
    _require_dag_truth(truth)
    _check_budget(truth, pred)
    if truth.n != pred.n:
        raise NodeMismatchError(f"truth has {truth.n} nodes, prediction has {pred.n}")
    truth_reach, pred_reach = reach_oracle(truth), reach_oracle(pred)
    structural = 0
    invalid = 0
    for i, j in itertools.permutations(range(truth.n), 2):
        agree = truth_reach.reach[i, j] == pred_reach.reach[i, j]
        structural += int(not agree)
        if restrict and not agree:
            continue
        invalid += int(oracle_pair_invalid(truth, pred, i, j, truth_reach, pred_reach))
    return structural, invalid


def ced_oracle(truth: CausalGraph, pred: CausalGraph) -> int:
    structural, invalid = _pairwise(truth, pred, restrict=True)
    return structural + invalid


def sid_oracle(truth: CausalGraph, pred: CausalGraph) -> int:
    _, invalid = _pairwise(truth, pred, restrict=False)
    return invalid


def _v_structures(graph: nx.DiGraph, adjacent: nx.Graph) -> set[tuple[int, int, int]]:
    found = set()
    for c in graph:
        parents = sorted(p for p in graph.predecessors(c) if not graph.has_edge(c, p))
        for a, b in itertools.combinations(parents, 2):
            if not adjacent.has_edge(a, b):
                found.add((a, c, b))
    return found


def mec_oracle(g: CausalGraph) -> list[CausalGraph]:
    """Every acyclic orientation of the skeleton of ``g`` with the same v-structures."""
    graph = _digraph(g)
    adjacent = graph.to_undirected()
    pairs = sorted((min(a, b), max(a, b)) for a, b in adjacent.edges())
    if len(pairs) > MAX_SKELETON_EDGES:
        raise OracleBudgetError(f"{len(pairs)} skeleton edges exceed {MAX_SKELETON_EDGES}")
    target = _v_structures(graph, adjacent)

    members = []
    for bits in itertools.product((False, True), repeat=len(pairs)):
        candidate = nx.DiGraph()
        candidate.add_nodes_from(range(g.n))
        candidate.add_edges_from((b, a) if flip else (a, b) for (a, b), flip in zip(pairs, bits, strict=True))
        if not nx.is_directed_acyclic_graph(candidate):
            continue
        if _v_structures(candidate, adjacent) != target:
            continue
        members.append(
            CausalGraph.from_matrix(
                nx.to_numpy_array(candidate, nodelist=list(range(g.n))) > 0,
                labels=g.labels,
                kind=GraphKind.DAG,
                labelled=g.labelled,
            )
        )
    logger.debug(f"Oracle class of {len(pairs)} skeleton edges has {len(members)} members")
    return members
