"""Tests for the causal-effect metrics."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from causal_metrics.cpdag import dag_to_cpdag
from causal_metrics.effect import (
    adjustment_valid,
    cbc,
    ce_like,
    ced,
    kd,
    pair_verdicts,
    parents_in,
    predicted_adjustment,
    sid,
    sid_range,
)
from causal_metrics.errors import EnumerationLimitError, UnsupportedGraphError
from causal_metrics.graph import CausalGraph, reachability, undirected_pairs
from causal_metrics.schema import FailureReason, Interval
from causal_metrics.test.graphs import (
    CHAIN3,
    COLLIDER,
    CYCLE3,
    DROP,
    EDGELESS3,
    FORK3,
    REV23,
    REVCHAIN3,
    UND3,
    dag_pairs,
    dags,
)


def literal_verdicts(truth: CausalGraph, pred: CausalGraph, restrict: bool) -> np.ndarray:
    """One ``predicted_adjustment`` call per ordered pair."""
    truth_reach = reachability(truth).reach
    pred_reach = reachability(pred).reach
    flags = np.zeros((truth.n, truth.n), dtype=bool)
    for i, j in itertools.permutations(range(truth.n), 2):
        if restrict and truth_reach[i, j] != pred_reach[i, j]:
            continue
        flags[i, j] = not predicted_adjustment(truth, pred, i, j).verdict
    return flags


#####################################################################
### Adjustment checks                                             ###
#####################################################################


def test_parents_include_undirected_neighbours() -> None:
    """Undirected neighbours of a CPDAG node count as possible parents."""
    assert parents_in(CHAIN3, 1) == frozenset({0})
    assert parents_in(UND3, 1) == frozenset({0, 2})
    assert parents_in(CHAIN3, 0) == frozenset()


def test_empty_set_with_reverse_effect() -> None:
    """Z = {} fails when j is an ancestor of i."""
    check = adjustment_valid(CHAIN3, 2, 0, [])

    assert not check.verdict
    assert check.failure is FailureReason.UNBLOCKED_CONFOUNDING_PATH
    assert adjustment_valid(CHAIN3, 1, 0, []).failure is FailureReason.UNBLOCKED_CONFOUNDING_PATH


def test_parent_set_is_valid() -> None:
    """Adjusting for the parents of i is valid."""
    check = adjustment_valid(CHAIN3, 1, 2, {0})

    assert check.verdict
    assert check.failure is FailureReason.NONE
    assert check.pair == (1, 2)
    assert check.z == (0,)


def test_opened_collider() -> None:
    """Conditioning on a collider between i and a cause of j opens a path."""
    truth = CausalGraph.from_edges(4, directed=[(0, 1), (0, 2), (3, 2), (3, 1)])

    check = adjustment_valid(truth, 0, 1, {2})

    assert check.failure is FailureReason.OPENED_COLLIDER_PATH
    assert adjustment_valid(truth, 0, 1, {3}).verdict


def test_descendant_of_mediator() -> None:
    """A set holding a descendant of a mediator blocks part of the effect."""
    truth = CausalGraph.from_edges(5, directed=[(0, 1), (1, 2), (1, 3), (3, 4)])

    check = adjustment_valid(truth, 0, 2, {4})

    assert check.failure is FailureReason.DESCENDANT_IN_Z


def test_conservative_sibling_verdict() -> None:
    """A child of i kept in Z is flagged even when it is not on an i -> j path."""
    truth = CausalGraph.from_edges(3, directed=[(0, 1), (0, 2)])

    check = adjustment_valid(truth, 0, 2, {1})

    assert check.failure is FailureReason.OPENED_COLLIDER_PATH


def test_adjustment_argument_errors() -> None:
    """Endpoints must be distinct, in range and outside Z."""
    with pytest.raises(ValueError):
        adjustment_valid(CHAIN3, 1, 1, [])
    with pytest.raises(ValueError):
        adjustment_valid(CHAIN3, 0, 2, {2})
    with pytest.raises(ValueError):
        adjustment_valid(CHAIN3, 0, 2, {0})
    with pytest.raises(ValueError):
        adjustment_valid(CHAIN3, 0, 5, [])


def test_zero_effect_shortcut() -> None:
    """A predicted parent with no predicted path i ~> j asserts a zero effect."""
    agrees = predicted_adjustment(CHAIN3, DROP, 1, 0)
    assert agrees.verdict
    assert agrees.z == ()

    missed = predicted_adjustment(CHAIN3, REV23, 1, 2)
    assert not missed.verdict
    assert missed.failure is FailureReason.ZERO_EFFECT_MISMATCH


#####################################################################
### Metric values                                                 ###
#####################################################################


def test_kd_and_cbc() -> None:
    """Reachability distances on the three-node fixtures."""
    assert kd(CHAIN3, DROP) == 2
    assert kd(CHAIN3, CHAIN3) == 0
    assert cbc(CHAIN3, DROP) == Fraction(3, 4)
    assert cbc(CHAIN3, CHAIN3) == 1


def test_cbc_needs_truth_edges() -> None:
    """CBC is undefined for an edgeless truth."""
    with pytest.raises(UnsupportedGraphError):
        cbc(EDGELESS3, CHAIN3)


def test_ced_values() -> None:
    """CED adds invalid adjustments over agreeing pairs to KD."""
    assert ced(CHAIN3, DROP) == 4
    assert ced(CHAIN3, REV23) == 4
    assert ced(CHAIN3, CHAIN3) == 0
    assert ce_like(CHAIN3, DROP, alpha=2, beta=0, constant=1) == 5
    assert ce_like(CHAIN3, DROP, alpha=0, beta=Fraction(1, 2)) == 1


def test_sid_values() -> None:
    """SID counts invalid adjustments over every ordered pair."""
    assert sid(CHAIN3, DROP) == 2
    assert sid(CHAIN3, REV23) == 3
    assert sid(CHAIN3, FORK3) == 3
    assert sid(CHAIN3, REVCHAIN3) == 6
    assert sid(CHAIN3, CHAIN3) == 0


def test_sid_can_undercut_kd() -> None:
    """SID ignores spurious effects that KD penalises."""
    assert sid(EDGELESS3, CHAIN3) == 0
    assert kd(EDGELESS3, CHAIN3) == 3


def test_sid_requires_dags() -> None:
    """SID is only defined between DAGs."""
    with pytest.raises(UnsupportedGraphError):
        sid(CHAIN3, UND3)
    with pytest.raises(UnsupportedGraphError):
        sid(UND3, CHAIN3)
    with pytest.raises(UnsupportedGraphError):
        sid(CHAIN3, CYCLE3)


def test_sid_range_over_class() -> None:
    """A CPDAG prediction yields the SID range over its class members."""
    assert sid_range(CHAIN3, UND3) == Interval(lo=0, hi=6)
    assert sid_range(CHAIN3, CHAIN3) == Interval(lo=0, hi=0)

    with pytest.raises(EnumerationLimitError):
        sid_range(CHAIN3, UND3, limit=1)
    with pytest.raises(UnsupportedGraphError):
        sid_range(CHAIN3, CYCLE3)


def test_cpdag_truth_against_itself() -> None:
    """Undirected truth edges stay open in both directions, even against an identical prediction."""
    assert ced(UND3, UND3) == 6
    assert kd(UND3, UND3) == 0
    assert np.array_equal(pair_verdicts(UND3, UND3), ~np.eye(3, dtype=bool))

    converted = dag_to_cpdag(CHAIN3)
    assert ced(converted, converted) == 6
    collider = dag_to_cpdag(COLLIDER)
    assert ced(collider, collider) == 0


def test_pair_verdicts_restriction() -> None:
    """Disagreeing pairs are left out of the restricted verdicts."""
    restricted = pair_verdicts(CHAIN3, REV23)
    full = pair_verdicts(CHAIN3, REV23, restrict_to_agreeing=False)

    assert restricted.sum() == 1
    assert restricted[2, 0]
    assert full.sum() == 3
    assert full[1, 2] and full[2, 0] and full[2, 1]


#####################################################################
### Properties                                                    ###
#####################################################################


@settings(max_examples=60, deadline=None)
@given(dag_pairs(max_nodes=6))
def test_batched_verdicts_match_pairwise_checks(pair: tuple[CausalGraph, CausalGraph]) -> None:
    """The vectorised row evaluation agrees with one check per pair."""
    truth, pred = pair
    for restrict in (True, False):
        expected = literal_verdicts(truth, pred, restrict)
        assert np.array_equal(pair_verdicts(truth, pred, restrict, jobs=1), expected)


@settings(max_examples=30, deadline=None)
@given(dag_pairs(max_nodes=6))
def test_batched_verdicts_match_for_cpdag_predictions(
    pair: tuple[CausalGraph, CausalGraph],
) -> None:
    """Undirected neighbours take part in Z exactly as parents do."""
    truth, pred = pair
    cpdag = dag_to_cpdag(pred)
    assert np.array_equal(pair_verdicts(truth, cpdag, True), literal_verdicts(truth, cpdag, True))


@settings(max_examples=30, deadline=None)
@given(dag_pairs(min_nodes=5, max_nodes=12))
def test_verdicts_do_not_depend_on_threads(pair: tuple[CausalGraph, CausalGraph]) -> None:
    """Row parallelism never changes the result."""
    truth, pred = pair
    single = pair_verdicts(truth, pred, jobs=1)
    assert np.array_equal(pair_verdicts(truth, pred, jobs=4), single)


@settings(max_examples=60, deadline=None)
@given(dags(max_nodes=8))
def test_effect_distances_vanish_on_identity(g: CausalGraph) -> None:
    """A graph makes no effect errors against itself."""
    assert kd(g, g) == 0
    assert ced(g, g) == 0
    assert sid(g, g) == 0


@settings(max_examples=60, deadline=None)
@given(dag_pairs(max_nodes=7))
def test_metric_bounds(pair: tuple[CausalGraph, CausalGraph]) -> None:
    """CED dominates KD and SID stays within the number of ordered pairs."""
    truth, pred = pair
    n = truth.n
    distance = kd(truth, pred)

    assert kd(pred, truth) == distance
    assert distance <= ced(truth, pred) <= n * (n - 1)
    assert 0 <= sid(truth, pred) <= n * (n - 1)
    if truth.edge_count:
        assert 0 <= cbc(truth, pred) <= 1


@settings(max_examples=30, deadline=None)
@given(dag_pairs(max_nodes=5))
def test_sid_range_contains_member(pair: tuple[CausalGraph, CausalGraph]) -> None:
    """The SID of a DAG lies within the range of its class."""
    truth, pred = pair
    interval = sid_range(truth, dag_to_cpdag(pred))

    assert interval.lo <= sid(truth, pred) <= interval.hi


@settings(max_examples=40, deadline=None)
@given(dags(max_nodes=7))
def test_cpdag_identity_counts_undirected_pairs(g: CausalGraph) -> None:
    """Against itself a CPDAG flags both orders of every undirected pair, and
    scores zero exactly when nothing is left undirected."""
    cpdag = dag_to_cpdag(g)
    flags = pair_verdicts(cpdag, cpdag)
    pairs = undirected_pairs(cpdag)

    for u, v in pairs:
        assert flags[u, v] and flags[v, u]
    assert ced(cpdag, cpdag) >= 2 * len(pairs)
    assert (ced(cpdag, cpdag) == 0) == (not pairs)


@settings(max_examples=60, deadline=None)
@given(dag_pairs(max_nodes=8))
def test_ced_between_kd_and_agreeing_pairs(pair: tuple[CausalGraph, CausalGraph]) -> None:
    """Each agreeing pair adds at most one to KD."""
    truth, dag = pair
    for pred in (dag, dag_to_cpdag(dag)):
        agreeing = reachability(truth).reach == reachability(pred).reach
        np.fill_diagonal(agreeing, False)
        distance = kd(truth, pred)

        assert distance <= ced(truth, pred) <= distance + int(agreeing.sum())
