import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnfgraph import (
    ClauseSystem,
    ModelParams,
    ValidationError,
    count_k22,
    count_k22_explicit,
    default_threshold,
    degrees,
    materialize,
    neighborhood,
    prune,
    sample_cnf,
)
from cnfgraph.graph import adjacency_matrix, clause_sets, clause_graph_contains

from conftest import clause_systems


def test_path_keeps_everything(path_system):
    result = prune(path_system, 0)
    assert result.surviving_left == [0, 1]
    assert count_k22(result.restricted).total == 0


def test_complete_2x2_loses_everything():
    result = prune(ClauseSystem(0, [0, 0], [0, 0]), 0)
    assert result.surviving_left == []
    assert result.stats.removed_k22 == 2
    assert result.stats.surviving_average_degree == 0.0


def test_random_instance_is_k22_free():
    cs = sample_cnf(ModelParams(None, 0.3, 30, 30, n_clauses=4, seed=2024))
    result = prune(cs, 1)
    g = materialize(result.restricted)
    assert count_k22_explicit(g).total == 0
    assert result.restricted.n == cs.n


def test_low_degree_counted_first():
    # vertex 0 has degree 1 and no K22; vertices 1, 2 form a K22 with both right vertices
    cs = ClauseSystem(1, [1, 0, 0], [1, 0])
    result = prune(cs, 3)
    assert result.stats.removed_low_degree == 3
    assert result.stats.removed_k22 == 0
    result = prune(cs, 2)
    assert result.stats.removed_low_degree == 1
    assert result.stats.removed_k22 == 2


def test_stats_and_dict():
    cs = sample_cnf(ModelParams(None, 0.4, 40, 40, n_clauses=6, seed=8))
    result = prune(cs, 2)
    deg = degrees(cs)
    s = result.stats
    assert s.removed_low_degree + s.removed_k22 + s.surviving_count == cs.n_left
    if result.surviving_left:
        assert s.surviving_average_degree == pytest.approx(deg[result.surviving_left].mean())
    doc = result.to_dict()
    assert doc["surviving_left"] == result.surviving_left
    assert set(doc["stats"]) >= {"removed_low_degree", "removed_k22", "surviving_count",
                                 "surviving_average_degree"}


def test_prune_right_flag():
    cs = sample_cnf(ModelParams(None, 0.4, 30, 30, n_clauses=6, seed=3))
    result = prune(cs, 0, prune_right=True)
    assert result.surviving_right is not None
    report = count_k22(cs)
    assert all(report.right_participation[w] == 0 for w in result.surviving_right)
    assert count_k22(result.restricted).total == 0
    assert "surviving_right" in result.to_dict()


def test_negative_threshold():
    with pytest.raises(ValidationError):
        prune(ClauseSystem(0, [0], [0]), -1)


@settings(max_examples=150, deadline=None)
@given(clause_systems(max_n=6, max_side=12), st.integers(0, 6))
def test_pruning_invariants(cs, threshold):
    result = prune(cs, threshold)
    report = count_k22(cs)
    deg = degrees(cs)
    for v in result.surviving_left:
        assert deg[v] >= threshold and report.left_participation[v] == 0
    restricted = result.restricted
    assert count_k22_explicit(materialize(restricted)).total == 0
    # survivor neighborhoods unchanged
    for i, v in enumerate(result.surviving_left):
        assert neighborhood(restricted, i) == neighborhood(cs, v)
    # same clauses restricted to V': (A_i ∩ V') x W ∪ V' x B_i reproduces the edges
    sets = clause_sets(cs)
    surv = result.surviving_left
    adj = adjacency_matrix(restricted)
    for i, v in enumerate(surv):
        for w in range(cs.n_right):
            in_all = all(clause_graph_contains(A & set(surv), B, v, w) for A, B in sets)
            assert adj[i, w] == in_all


@settings(max_examples=60, deadline=None)
@given(clause_systems(max_n=5, max_side=10))
def test_threshold_monotone(cs):
    counts = [prune(cs, t).stats.surviving_count for t in range(0, 12)]
    assert counts == sorted(counts, reverse=True)


class TestDefaultThreshold:
    def test_no_clauses(self):
        params = ModelParams(None, 0.3, 10, 37, n_clauses=0)
        assert default_threshold(params, 1.0) == 37

    def test_half_of_expected(self):
        params = ModelParams(None, 0.5, 10, 1000, n_clauses=2)
        assert default_threshold(params, 0.5) == 281

    def test_tiny_safety(self):
        params = ModelParams(None, 0.5, 10, 1000, n_clauses=2)
        assert default_threshold(params, 1e-9) == 0

    @pytest.mark.parametrize("safety", [0, -0.5, 1.5])
    def test_domain(self, safety):
        with pytest.raises(ValidationError):
            default_threshold(ModelParams(None, 0.5, 10, 10, n_clauses=2), safety)
