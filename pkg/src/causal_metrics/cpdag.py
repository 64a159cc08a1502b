"""CPDAG construction and Markov equivalence class enumeration."""

import itertools
import logging

import numpy as np

from causal_metrics.errors import EnumerationLimitError, UnsupportedGraphError
from causal_metrics.graph import (
    BoolMatrix,
    CausalGraph,
    has_cycle,
    skeleton,
    undirected_pairs,
    v_structures,
)
from causal_metrics.schema import GraphKind
from causal_metrics.settings import settings

logger = logging.getLogger("causal_metrics.cpdag")


def _orient(pdag: BoolMatrix, u: int, v: int) -> None:
    pdag[v, u] = False


def _rule1(pdag: BoolMatrix, adjacent: BoolMatrix) -> bool:
    """a -> b -- c with a, c non-adjacent: orient b -> c."""
    changed = False
    n = pdag.shape[0]
    for b in range(n):
        parents = np.flatnonzero(pdag[:, b] & ~pdag[b, :])
        for c in np.flatnonzero(pdag[b, :] & pdag[:, b]):
            if any(a != c and not adjacent[a, c] for a in parents):
                _orient(pdag, b, int(c))
                changed = True
    return changed


def _rule2(pdag: BoolMatrix) -> bool:
    """a -> b -> c with a -- c: orient a -> c."""
    changed = False
    directed = pdag & ~pdag.T
    chained = (directed.astype(np.int64) @ directed.astype(np.int64)) > 0
    for a, c in zip(*np.nonzero(pdag & pdag.T & chained), strict=True):
        if pdag[c, a]:
            _orient(pdag, int(a), int(c))
            changed = True
    return changed


def _rule3(pdag: BoolMatrix, adjacent: BoolMatrix) -> bool:
    """a -- b -> d, a -- c -> d, a -- d, b and c non-adjacent: orient a -> d."""
    changed = False
    n = pdag.shape[0]
    for a in range(n):
        for d in range(n):
            if not (pdag[a, d] and pdag[d, a]):
                continue
            undirected_a = pdag[a, :] & pdag[:, a]
            into_d = pdag[:, d] & ~pdag[d, :]
            middles = np.flatnonzero(undirected_a & into_d)
            if any(
                not adjacent[b, c] for b, c in itertools.combinations(middles.tolist(), 2)
            ):
                _orient(pdag, a, d)
                changed = True
    return changed


def dag_to_cpdag(g: CausalGraph) -> CausalGraph:
    """Convert a DAG to the CPDAG representing its Markov equivalence class.

    The skeleton is kept, v-structures are oriented, the closure under the
    three orientation-propagation rules is taken and every edge left
    unoriented is written in both directions.
    """
    if g.kind is not GraphKind.DAG:
        raise UnsupportedGraphError("dag_to_cpdag", f"input is a {g.kind.value}, not a DAG")

    adjacent = skeleton(g)
    pdag = adjacent.copy()
    for a, c, b in v_structures(g):
        _orient(pdag, a, c)
        _orient(pdag, b, c)

    while True:
        changed = _rule1(pdag, adjacent)
        changed = _rule2(pdag) or changed
        changed = _rule3(pdag, adjacent) or changed
        if not changed:
            break

    return g.with_matrix(pdag, kind=GraphKind.CPDAG)


def enumerate_mec(g: CausalGraph, limit: int | None = None) -> list[CausalGraph]:
    """All DAGs represented by a CPDAG.

    Each undirected edge ``u -- v`` (``u < v``, row-major) is a bit: 0 orients
    it ``u -> v`` and 1 orients it ``v -> u``. Bit vectors are visited in
    lexicographic order; an orientation is kept when it is acyclic and adds no
    v-structure.

    Raises:
        UnsupportedGraphError: If ``g`` is a cyclic digraph
        EnumerationLimitError: If ``g`` has more undirected edges than ``limit``
    """
    if g.kind is GraphKind.DIGRAPH:
        raise UnsupportedGraphError("enumerate_mec", "input is a cyclic digraph, not a CPDAG")

    limit = settings.mec_limit if limit is None else limit
    pairs = undirected_pairs(g)
    if len(pairs) > limit:
        raise EnumerationLimitError(len(pairs), limit)

    target = v_structures(g)
    base = np.asarray(g.adj).copy()
    for u, v in pairs:
        base[u, v] = base[v, u] = False

    members: list[CausalGraph] = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        candidate = base.copy()
        for (u, v), bit in zip(pairs, bits, strict=True):
            if bit:
                candidate[v, u] = True
            else:
                candidate[u, v] = True
        if has_cycle(candidate):
            continue
        member = g.with_matrix(candidate, kind=GraphKind.DAG)
        if v_structures(member) == target:
            members.append(member)

    logger.debug(
        f"Enumerated {len(members)} of {2 ** len(pairs)} orientations "
        f"for {len(pairs)} undirected edges"
    )
    return members
