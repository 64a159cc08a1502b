"""Tests for CPDAG construction and equivalence class enumeration."""

import numpy as np
import pytest
from hypothesis import given, settings

from causal_metrics.cpdag import dag_to_cpdag, enumerate_mec
from causal_metrics.errors import EnumerationLimitError, UnsupportedGraphError
from causal_metrics.graph import CausalGraph
from causal_metrics.schema import GraphKind
from causal_metrics.test.graphs import (
    CHAIN3,
    COLLIDER,
    CYCLE3,
    FORK3,
    REVCHAIN3,
    UND3,
    dags,
)


def test_chain_is_fully_undirected() -> None:
    """A chain shares its class with the fork and the reversed chain."""
    cpdag = dag_to_cpdag(CHAIN3)

    assert cpdag.kind is GraphKind.CPDAG
    assert cpdag == UND3
    assert dag_to_cpdag(FORK3) == UND3
    assert dag_to_cpdag(REVCHAIN3) == UND3


def test_collider_stays_oriented() -> None:
    """V-structures are compelled."""
    cpdag = dag_to_cpdag(COLLIDER)

    assert cpdag.kind is GraphKind.CPDAG
    assert np.array_equal(cpdag.adj, COLLIDER.adj)


def test_orientation_propagates_away_from_collider() -> None:
    """a -> b <- c, b -- d becomes b -> d."""
    dag = CausalGraph.from_edges(4, directed=[(0, 2), (1, 2), (2, 3)])

    assert np.array_equal(dag_to_cpdag(dag).adj, dag.adj)


def test_orientation_avoids_cycles() -> None:
    """a -> b -> c with a -- c becomes a -> c."""
    dag = CausalGraph.from_edges(4, directed=[(0, 1), (3, 1), (1, 2), (0, 2)])

    assert np.array_equal(dag_to_cpdag(dag).adj, dag.adj)


def test_orientation_with_two_undirected_paths() -> None:
    """a -- b -> d, a -- c -> d, a -- d with b, c non-adjacent becomes a -> d."""
    dag = CausalGraph.from_edges(4, directed=[(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])

    cpdag = dag_to_cpdag(dag)

    expected = CausalGraph.from_edges(
        4, directed=[(1, 3), (2, 3), (0, 3)], undirected=[(0, 1), (0, 2)]
    )
    assert cpdag == expected
    assert len(enumerate_mec(cpdag)) == 3


def test_dag_to_cpdag_rejects_non_dags() -> None:
    """Only DAGs have a well-defined CPDAG."""
    with pytest.raises(UnsupportedGraphError):
        dag_to_cpdag(UND3)
    with pytest.raises(UnsupportedGraphError):
        dag_to_cpdag(CYCLE3)


def test_enumerate_chain_class() -> None:
    """Members come out in orientation bit order and exclude new colliders."""
    members = enumerate_mec(UND3)

    assert members == [CHAIN3, FORK3, REVCHAIN3]
    assert all(member.kind is GraphKind.DAG for member in members)


def test_enumerate_dag_is_itself() -> None:
    """A graph with no undirected edge is the sole member of its class."""
    assert enumerate_mec(COLLIDER) == [COLLIDER]


def test_enumeration_limit() -> None:
    """Large classes are refused instead of enumerated."""
    with pytest.raises(EnumerationLimitError) as excinfo:
        enumerate_mec(UND3, limit=1)

    assert excinfo.value.undirected == 2
    assert excinfo.value.limit == 1


def test_enumerate_rejects_cycles() -> None:
    """A cyclic digraph has no equivalence class."""
    with pytest.raises(UnsupportedGraphError):
        enumerate_mec(CYCLE3)


@settings(max_examples=40, deadline=None)
@given(dags(max_nodes=5))
def test_every_member_shares_the_cpdag(g: CausalGraph) -> None:
    """The class of a DAG contains it and maps back to the same CPDAG."""
    cpdag = dag_to_cpdag(g)
    members = enumerate_mec(cpdag)

    assert g in members
    assert len(set(members)) == len(members)
    for member in members:
        assert dag_to_cpdag(member) == cpdag
