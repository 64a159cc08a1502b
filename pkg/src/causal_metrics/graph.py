"""Graph representation and reachability.

A ``CausalGraph`` is a labelled boolean adjacency matrix where ``adj[i, j]``
asserts the edge ``i -> j``. Undirected CPDAG edges are stored as a symmetric
pair of ones; there is no separate undirected-edge list.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from causal_metrics.errors import GraphValidationError, NodeMismatchError
from causal_metrics.schema import GraphKind

logger = logging.getLogger("causal_metrics.graph")

BoolMatrix = NDArray[np.bool_]
NodeSet = frozenset[int]


def _frozen(matrix: Any) -> BoolMatrix:
    array = np.array(matrix, dtype=bool, copy=True)
    array.setflags(write=False)
    return array


def closure(adj: BoolMatrix) -> BoolMatrix:
    """Reflexive transitive closure of an adjacency matrix.

    Equal to the indicator of ``(adj + I) ** (n - 1)``, computed by repeated
    squaring so only ``ceil(log2(n - 1))`` products are needed.
    """
    n = adj.shape[0]
    reach = adj.astype(np.float32)
    np.fill_diagonal(reach, 1.0)
    hops = 1
    while hops < n - 1:
        squared = (reach @ reach) > 0
        hops *= 2
        if np.array_equal(squared, reach > 0):
            break
        reach = squared.astype(np.float32)
    return reach > 0


def has_cycle(adj: BoolMatrix) -> bool:
    """True when the directed graph ``adj`` contains a directed cycle."""
    reach = closure(adj)
    # a cycle through i is an edge i -> k with k reaching back to i
    return bool(np.any(adj & reach.T))


def infer_kind(adj: BoolMatrix) -> GraphKind:
    symmetric = adj & adj.T
    directed = adj & ~symmetric
    if has_cycle(directed):
        return GraphKind.DIGRAPH
    if symmetric.any():
        return GraphKind.CPDAG
    return GraphKind.DAG


class CausalGraph(BaseModel):
    """A node-labelled causal graph.

    Instances are immutable and validated on construction: the diagonal must be
    zero and the matrix must satisfy the constraints of ``kind``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: tuple[str, ...]
    adj: np.ndarray
    kind: GraphKind
    labelled: bool = Field(
        default=False,
        description="True when the labels were read from a file header rather than generated",
    )

    @field_validator("adj", mode="before")
    @classmethod
    def coerce_matrix(cls, value: Any) -> BoolMatrix:
        array = _frozen(value)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"adjacency must be a square matrix, got shape {array.shape}")
        return array

    @model_validator(mode="after")
    def check_invariants(self) -> CausalGraph:
        n = self.adj.shape[0]
        if n < 1:
            raise GraphValidationError("a graph needs at least one node")
        if len(self.labels) != n:
            raise GraphValidationError(f"{len(self.labels)} labels for {n} nodes")
        if len(set(self.labels)) != n:
            raise GraphValidationError("duplicate node labels")
        if self.adj.diagonal().any():
            node = self.labels[int(np.flatnonzero(self.adj.diagonal())[0])]
            raise GraphValidationError(f"self-loop on node {node!r}")

        symmetric = self.adj & self.adj.T
        if self.kind is GraphKind.DAG:
            if symmetric.any():
                raise GraphValidationError("a DAG cannot contain undirected edges")
            if has_cycle(self.adj):
                raise GraphValidationError("graph claimed as DAG contains a directed cycle")
        elif self.kind is GraphKind.CPDAG and has_cycle(self.adj & ~symmetric):
            raise GraphValidationError("directed part of a CPDAG contains a cycle")
        return self

    @classmethod
    def from_matrix(
        cls,
        adj: Any,
        labels: Sequence[str] | None = None,
        kind: GraphKind | None = None,
        labelled: bool = False,
    ) -> CausalGraph:
        """Build a graph from a 0/1 matrix, inferring ``kind`` when not given."""
        matrix = _frozen(adj)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise GraphValidationError(f"adjacency must be a square matrix, got shape {matrix.shape}")
        if matrix.diagonal().any():
            raise GraphValidationError("nonzero diagonal (self-loop)")
        n = matrix.shape[0]
        names = tuple(labels) if labels is not None else default_labels(n)
        return cls(
            labels=names,
            adj=matrix,
            kind=kind if kind is not None else infer_kind(matrix),
            labelled=labelled and labels is not None,
        )

    @classmethod
    def from_edges(
        cls,
        n: int,
        directed: Iterable[tuple[int, int]] = (),
        undirected: Iterable[tuple[int, int]] = (),
        labels: Sequence[str] | None = None,
        kind: GraphKind | None = None,
    ) -> CausalGraph:
        adj = np.zeros((n, n), dtype=bool)
        for u, v in directed:
            adj[u, v] = True
        for u, v in undirected:
            adj[u, v] = adj[v, u] = True
        return cls.from_matrix(adj, labels=labels, kind=kind, labelled=labels is not None)

    @property
    def n(self) -> int:
        return int(self.adj.shape[0])

    @property
    def edge_count(self) -> int:
        """Number of adjacent unordered pairs."""
        return int(np.count_nonzero(np.triu(self.adj | self.adj.T)))

    @property
    def is_acyclic(self) -> bool:
        return self.kind is not GraphKind.DIGRAPH

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise NodeMismatchError(f"unknown node {label!r}") from None

    def with_matrix(self, adj: Any, kind: GraphKind | None = None) -> CausalGraph:
        """Same node labels, new adjacency."""
        return CausalGraph.from_matrix(adj, labels=self.labels, kind=kind, labelled=self.labelled)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CausalGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.kind == other.kind
            and bool(np.array_equal(self.adj, other.adj))
        )

    def __hash__(self) -> int:
        return hash((self.labels, self.kind, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"CausalGraph(kind={self.kind.value}, n={self.n}, edges={self.edge_count})"


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(index + 1) for index in range(n))


class ReachabilityMatrix(BaseModel):
    """Boolean descendant closure of a graph with a reflexive diagonal."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    reach: np.ndarray

    @field_validator("reach", mode="before")
    @classmethod
    def coerce_matrix(cls, value: Any) -> BoolMatrix:
        return _frozen(value)

    @property
    def n(self) -> int:
        return int(self.reach.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReachabilityMatrix):
            return NotImplemented
        return bool(np.array_equal(self.reach, other.reach))

    def __hash__(self) -> int:
        return hash(self.reach.tobytes())


def reachability(g: CausalGraph) -> ReachabilityMatrix:
    """Reachability matrix of ``g``; undirected edges are traversable both ways."""
    return ReachabilityMatrix(reach=closure(np.asarray(g.adj)))


#####################################################################
### Structural helpers                                            ###
#####################################################################


def skeleton(g: CausalGraph) -> BoolMatrix:
    """Symmetric adjacency indicator, diagonal excluded."""
    return np.asarray(g.adj | g.adj.T)


def undirected_pairs(g: CausalGraph) -> list[tuple[int, int]]:
    """Undirected edges as ``(u, v)`` with ``u < v``, in row-major order."""
    rows, cols = np.nonzero(np.triu(g.adj & g.adj.T))
    return [(int(u), int(v)) for u, v in zip(rows, cols, strict=True)]


def directed_part(g: CausalGraph) -> BoolMatrix:
    """Edges asserted in exactly one direction."""
    return np.asarray(g.adj & ~g.adj.T)


def v_structures(g: CausalGraph) -> frozenset[tuple[int, int, int]]:
    """Colliders ``a -> c <- b`` with ``a < b`` non-adjacent, over directed edges only."""
    directed = directed_part(g)
    adjacent = skeleton(g)
    found: set[tuple[int, int, int]] = set()
    for c in range(g.n):
        parents = np.flatnonzero(directed[:, c])
        for position, a in enumerate(parents):
            for b in parents[position + 1 :]:
                if not adjacent[a, b]:
                    found.add((int(a), int(c), int(b)))
    return frozenset(found)


def require_same_nodes(truth: CausalGraph, pred: CausalGraph) -> None:
    if truth.n != pred.n:
        raise NodeMismatchError(f"truth has {truth.n} nodes, prediction has {pred.n}")
    if truth.labelled and pred.labelled and truth.labels != pred.labels:
        raise NodeMismatchError("truth and prediction label the nodes differently; call align()")


def align(truth: CausalGraph, pred: CausalGraph) -> tuple[CausalGraph, CausalGraph]:
    """Put ``pred`` in the node order of ``truth``.

    Alignment is by label when both graphs were read with a header, by
    position otherwise.
    """
    if truth.n != pred.n:
        raise NodeMismatchError(f"truth has {truth.n} nodes, prediction has {pred.n}")
    if not (truth.labelled and pred.labelled):
        if pred.labels == truth.labels:
            return truth, pred
        return truth, CausalGraph(
            labels=truth.labels, adj=pred.adj, kind=pred.kind, labelled=truth.labelled
        )

    if set(truth.labels) != set(pred.labels):
        missing = sorted(set(truth.labels) - set(pred.labels))
        extra = sorted(set(pred.labels) - set(truth.labels))
        raise NodeMismatchError(f"label sets differ: missing {missing}, unexpected {extra}")
    if truth.labels == pred.labels:
        return truth, pred

    order = [pred.labels.index(label) for label in truth.labels]
    logger.debug("Reordering prediction columns to match truth labels")
    reordered = pred.adj[np.ix_(order, order)]
    return truth, CausalGraph(labels=truth.labels, adj=reordered, kind=pred.kind, labelled=True)
