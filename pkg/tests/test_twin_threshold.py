from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from impsel import (
    DirectedGraph,
    GraphClassSpec,
    ThresholdPair,
    additive_gap,
    check_trace_invariants,
    enumerate_graphs,
    plan_thresholds_general,
    plan_thresholds_k1,
    run_twin_threshold,
    sample_graph,
    select_twin_threshold,
    validate_thresholds,
)
from conftest import graph


def test_threshold_pair_validation():
    with pytest.raises(ValueError):
        ThresholdPair(1, 2)  # t > T
    with pytest.raises(ValueError):
        ThresholdPair(1, 0)
    ThresholdPair(4, 1).validate_for(5)
    with pytest.raises(ValueError):
        ThresholdPair(4, 1).validate_for(4)


def test_run_on_empty_graph():
    out, trace = run_twin_threshold(DirectedGraph.empty(5), ThresholdPair(3, 2))
    assert out.vertex is None
    assert trace.deletions == () and trace.iteration_count == 0
    assert trace.deleted_set == frozenset()
    assert trace.final_degrees == (0, 0, 0, 0, 0)


def test_run_star_keeps_top_vertex():
    star = graph(5, (2, 1), (3, 1), (4, 1), (5, 1))
    out, trace = run_twin_threshold(star, ThresholdPair(3, 2))
    assert out.selected == frozenset({1}) and out.selected_indegree == 4
    assert trace.deletions == ((0, 1, 4),)  # only the hub reaches the lower threshold
    assert trace.final_degrees == (4, 0, 0, 0, 0)
    assert trace.istar[1] == 0 and trace.istar[2] == trace.iteration_count == 1
    assert trace.dstar == {1: 4}


def test_run_cascade_two_deletions():
    g = graph(5, (1, 5), (2, 5), (3, 5), (5, 4), (3, 4))
    out, trace = run_twin_threshold(g, ThresholdPair(2, 1))
    assert trace.deletions == ((0, 5, 3), (1, 4, 1))  # 5 first, dropping 4 to degree 1
    assert out.selected == frozenset({5})
    assert trace.final_degrees[4] == 3  # vertex 5 keeps its support


def test_no_deletion_below_lower_threshold():
    g = graph(4, (2, 1))
    out, trace = run_twin_threshold(g, ThresholdPair(3, 2))
    assert trace.deletions == () and out.vertex is None


def test_deleted_vertex_degrees_keep_dropping_after_deletion():
    # 1 and 2 nominate each other; both are deleted, and the later deletion
    # lowers the earlier victim's remaining degree before selection.
    g = graph(4, (1, 2), (2, 1), (3, 1), (4, 2))
    out, trace = run_twin_threshold(g, ThresholdPair(2, 1))
    assert trace.deletions == ((0, 2, 2), (1, 1, 1))
    assert trace.final_degrees == (1, 1, 0, 0)
    assert out.vertex is None  # nothing left at the upper threshold


def test_traced_and_untraced_paths_agree_on_a_class():
    spec = GraphClassSpec(4, None)
    for g in enumerate_graphs(spec):
        for pair in (ThresholdPair(2, 1), ThresholdPair(3, 2), ThresholdPair(3, 3)):
            out, _ = run_twin_threshold(g, pair)
            assert out == select_twin_threshold(g, pair.upper, pair.lower)


def test_additive_gap_examples():
    empty = DirectedGraph.empty(4)
    out, _ = run_twin_threshold(empty, ThresholdPair(2, 1))
    assert additive_gap(empty, out) == 0

    star = graph(5, (2, 1), (3, 1), (4, 1), (5, 1))
    got, _ = run_twin_threshold(star, ThresholdPair(3, 2))
    assert additive_gap(star, got) == 0
    from impsel import Outcome

    assert additive_gap(star, Outcome.none()) == 4


# ---- validation ----


def test_validate_thresholds_examples():
    r = validate_thresholds(100, 1, ThresholdPair(16, 10))
    assert (r.condition_lhs, r.condition_rhs, r.impartial_certified) == (Fraction(107), 102, True)
    r = validate_thresholds(100, 1, ThresholdPair(10, 10))
    assert (r.condition_lhs, r.condition_rhs, r.impartial_certified) == (Fraction(20), 102, False)
    r = validate_thresholds(5, 1, ThresholdPair(4, 1))
    assert (r.condition_lhs, r.condition_rhs, r.impartial_certified) == (Fraction(14), 7, True)
    assert r.alpha_bound == 4 + 5 - 2


def test_condition_margin_is_integral_and_exact():
    # T(T+3) and t(1-t) are both even, so the halved margin is an integer
    r = validate_thresholds(6, 1, ThresholdPair(4, 2))
    assert r.condition_lhs == 13 and r.condition_lhs.denominator == 1
    assert r.impartial_certified == (26 > 2 * 8)


def test_validate_thresholds_rejects_bad_parameters():
    with pytest.raises(ValueError):
        validate_thresholds(5, 0, ThresholdPair(3, 1))
    with pytest.raises(ValueError):
        validate_thresholds(5, 5, ThresholdPair(3, 1))
    with pytest.raises(ValueError):
        validate_thresholds(4, 1, ThresholdPair(4, 1))


# ---- planning ----


def test_plan_k1_spot_values():
    r = plan_thresholds_k1(100)
    assert (r.thresholds.lower, r.thresholds.upper, r.alpha_bound) == (10, 16, 24)
    assert r.impartial_certified and not r.degenerate

    r = plan_thresholds_k1(4)
    assert (r.thresholds.lower, r.thresholds.upper, r.alpha_bound) == (2, 3, 3)

    r = plan_thresholds_k1(2)
    assert r.degenerate and "never select" in r.note
    with pytest.raises(ValueError):
        plan_thresholds_k1(1)


def test_plan_k1_guarantee_is_exact_square_comparison():
    for n in (4, 9, 16, 25, 100, 10_000, 12345):
        r = plan_thresholds_k1(n)
        if not r.degenerate:
            assert r.impartial_certified
            assert r.alpha_bound**2 <= 8 * n


def test_plan_general_spot_values():
    r = plan_thresholds_general(100, 1, 0.0, 1.0)
    assert (r.thresholds.upper, r.thresholds.lower) == (24, 5)
    assert r.condition_lhs == Fraction(576 + 72 + 5 - 25, 2) == 314
    assert r.condition_rhs == 102 and r.impartial_certified

    r = plan_thresholds_general(16, 1, 1.0, 1.0)
    assert r.degenerate  # raw upper threshold 39 exceeds n-1


def test_plan_general_rejects_bad_domains():
    with pytest.raises(ValueError):
        plan_thresholds_general(10, 3, 0.0, 1.0)  # k > c*n^kappa
    with pytest.raises(ValueError):
        plan_thresholds_general(10, 2, 1.5, 1.0)
    with pytest.raises(ValueError):
        plan_thresholds_general(10, 2, 0.5, -1.0)
    with pytest.raises(ValueError):
        plan_thresholds_general(1, 1, 0.0, 1.0)


def test_plan_general_alpha_stays_order_root_n_for_constant_k():
    n = 16
    while n <= 4096:
        r = plan_thresholds_general(n, 1, 0.0, 1.0)
        assert not r.degenerate and r.impartial_certified
        assert r.alpha_bound**2 <= 25 * n  # alpha <= 5 sqrt(n), exactly
        n *= 2


def test_plan_k1_dense_range_never_breaks_its_own_promises():
    # the planner asserts certification and alpha^2 <= 8n internally whenever
    # the raw thresholds were in range; sweep a dense range to exercise that
    for n in range(2, 600):
        r = plan_thresholds_k1(n)
        assert r.degenerate or (r.impartial_certified and r.alpha_bound**2 <= 8 * n)
        assert 1 <= r.thresholds.lower <= r.thresholds.upper <= n - 1


def test_gap_bound_holds_on_sampled_graphs():
    from impsel import MechanismId, Sampled, measure_gap

    n, k = 30, 2
    plan = plan_thresholds_general(n, k, 0.0, float(k))
    mid = MechanismId.parse(f"twin:{plan.thresholds.upper},{plan.thresholds.lower}")
    report = measure_gap(mid, GraphClassSpec(n, k), Sampled(seed=11, trials=500))
    assert report.worst_gap <= plan.alpha_bound


# ---- trace invariants on random graphs ----


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(6, 16), st.integers(1, 3))
def test_trace_invariants_on_sampled_graphs(seed, n, k):
    spec = GraphClassSpec(n, min(k, n - 1), False)
    g = sample_graph(spec, seed)
    pair = ThresholdPair(min(3, n - 1), min(2, n - 1))
    report = check_trace_invariants(g, pair)
    assert report.ok, [c for c in report.checks if not c.ok]
    assert report.trace.iteration_count <= n  # at most one deletion per vertex
