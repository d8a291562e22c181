import random

import pytest

from tiledag import (
    BARRIER, GEMM, POTRF, TRSM,
    Task, TaskGraph, TileRef, TraceTimer, WeightModel,
    alap_profile, annotate_cp, asap_times, build_from_trace, trace_cp,
)


def T(i, kind="GEMM", reads=(), writes=(), idx=()):
    return Task(i, kind, idx, [TileRef(*r) for r in reads], [TileRef(*w) for w in writes])


def test_empty_trace():
    g = build_from_trace([])
    assert len(g) == 0 and g.edges == []


def test_single_raw_edge():
    trace = [T(0, "POTRF", writes=[("A", 0, 0)], reads=[("A", 0, 0)]),
             T(1, "TRSM", reads=[("A", 0, 0)], writes=[("A", 1, 0)])]
    g = build_from_trace(trace)
    assert g.edges == [(0, 1, "RAW")]


def test_war_waw_nearest_conflict():
    trace = [T(0, writes=[("A", 0, 0)]),
             T(1, reads=[("A", 0, 0)], writes=[("B", 0, 0)]),
             T(2, reads=[("A", 0, 0)], writes=[("B", 1, 1)]),
             T(3, writes=[("A", 0, 0)]),     # WAR from both readers, no WAW
             T(4, writes=[("A", 0, 0)])]     # WAW from 3 (no reads in between)
    g = build_from_trace(trace)
    assert (1, 3, "WAR") in g.edges and (2, 3, "WAR") in g.edges
    assert (0, 3, "WAW") not in g.edges
    assert (3, 4, "WAW") in g.edges


def test_duplicate_and_decreasing_ids_rejected():
    with pytest.raises(ValueError):
        build_from_trace([T(0), T(0)])
    with pytest.raises(ValueError):
        build_from_trace([T(1), T(0)])


def test_barrier_explicit_edges():
    trace = [T(0, writes=[("A", 0, 0)]), T(1, writes=[("B", 0, 0)]),
             T(2, "BARRIER"),
             T(3, reads=[("C", 9, 9)], writes=[("C", 0, 0)])]
    g = build_from_trace(trace)
    assert (0, 2, "EXPLICIT") in g.edges and (1, 2, "EXPLICIT") in g.edges
    assert (2, 3, "EXPLICIT") in g.edges


def test_backflow_toy_priorities():
    # A and B (weight 3) both sit atop chains whose best continuation is 13
    w = {"A": 3, "B": 3, "C": 4, "D": 3, "E": 4, "F": 9}
    tiles = {n: ("X", i, 0) for i, n in enumerate(w)}
    trace = [
        T(0, writes=[tiles["A"]]),
        T(1, writes=[tiles["B"]]),
        T(2, reads=[tiles["A"]], writes=[tiles["C"]]),
        T(3, reads=[tiles["A"], tiles["B"]], writes=[tiles["D"]]),
        T(4, reads=[tiles["B"]], writes=[tiles["E"]]),
        T(5, reads=[tiles["C"], tiles["D"], tiles["E"]], writes=[tiles["F"]]),
    ]
    names = ["A", "B", "C", "D", "E", "F"]

    class PerTask(WeightModel):
        def __init__(self):
            self.mode = "per-task"
            self.table = {}

        def of(self, task):
            return w[names[task.id]]

    g = build_from_trace(trace)
    ann = annotate_cp(g, PerTask())
    assert ann.priority[0] == 16 and ann.priority[1] == 16
    assert ann.cp_length == 16


def test_singleton_and_cycle():
    g = build_from_trace([T(0, "POTRF", writes=[("A", 0, 0)])])
    ann = annotate_cp(g, WeightModel.cholesky())
    assert ann.cp_length == 1
    bad = TaskGraph([T(0), T(1)], [(0, 1, "RAW"), (1, 0, "RAW")])
    with pytest.raises(ValueError, match="cycle"):
        annotate_cp(bad, WeightModel.unit())


def test_alap_profile_examples():
    wm = WeightModel.custom({GEMM: 4})
    g = build_from_trace([T(0, writes=[("A", 0, 0)])])
    prof = alap_profile(g, wm)
    assert prof.steps == [(0, 1)] and prof.makespan == 4 and prof.t_seq == 4
    # two independent tasks of weights 2 and 5 both end at t=5 under ALAP
    class PerTask(WeightModel):
        def __init__(self):
            self.mode = "per-task"
            self.table = {}

        def of(self, task):
            return [2, 5][task.id]

    g2 = build_from_trace([T(0, writes=[("A", 0, 0)]), T(1, writes=[("B", 0, 0)])])
    prof2 = alap_profile(g2, PerTask())
    assert prof2.steps == [(0, 1), (3, 2)] and prof2.makespan == 5
    assert prof2.area() == prof2.t_seq == 7


def _random_trace(rng, n=40, tiles=8):
    trace = []
    for i in range(n):
        reads = {("A", rng.randrange(tiles), 0) for _ in range(rng.randint(0, 2))}
        writes = {("A", rng.randrange(tiles), 0)}
        kind = rng.choice(["GEMM", "SYRK", "TRSM"])
        trace.append(T(i, kind, reads=sorted(reads), writes=sorted(writes)))
    return trace


def test_streaming_timer_matches_graph():
    rng = random.Random(7)
    wm = WeightModel.custom({GEMM: 6, "SYRK": 3, "TRSM": 3})
    for _ in range(30):
        trace = _random_trace(rng)
        g = build_from_trace(trace)
        ann = annotate_cp(g, wm)
        fins, cp = asap_times(trace, wm)
        assert cp == ann.cp_length
        for t in trace:
            assert fins[t.id] == ann.earliest[t.id] + wm.of(t)


def test_war_removal_never_increases_cp():
    rng = random.Random(3)
    wm = WeightModel.unit()
    for _ in range(30):
        g = build_from_trace(_random_trace(rng))
        full = annotate_cp(g, wm).cp_length
        nowar = annotate_cp(g.without_war_edges(), wm).cp_length
        assert nowar <= full


def test_unit_cp_lower_bounds_weighted():
    rng = random.Random(11)
    heavier = WeightModel.custom({GEMM: 6, "SYRK": 3, "TRSM": 2})
    for _ in range(20):
        trace = _random_trace(rng)
        assert trace_cp(trace, WeightModel.unit()) <= trace_cp(trace, heavier)


def test_est_lst_and_critical_tasks():
    rng = random.Random(5)
    wm = WeightModel.unit()
    for _ in range(20):
        g = build_from_trace(_random_trace(rng))
        ann = annotate_cp(g, wm)
        crit = set(ann.critical_ids())
        assert crit, "some critical task must exist"
        for tid in ann.priority:
            assert ann.earliest[tid] <= ann.latest[tid]
            assert (ann.earliest[tid] + ann.priority[tid] == ann.cp_length) == (tid in crit)


def test_transitive_redundant_edges_flagged():
    g = TaskGraph([T(0), T(1), T(2)],
                  [(0, 1, "RAW"), (1, 2, "RAW"), (0, 2, "RAW")])
    assert g.transitive_redundant_edges() == [(0, 2, "RAW")]


def test_weight_model_validation():
    with pytest.raises(ValueError):
        WeightModel.custom({"NOPE": 1})
    with pytest.raises(ValueError):
        WeightModel.custom({GEMM: -1})
    wm = WeightModel.cholesky()
    assert wm[POTRF] == 1 and wm[TRSM] == 3 and wm["SYRK"] == 3 and wm[GEMM] == 6
    q = WeightModel.qr_tt()
    assert (q["GEQRT"], q["TTQRT"], q["UNMQR"], q["TTMQR"]) == (4, 2, 6, 6)
    assert (q["TSQRT"], q["TSMQR"]) == (6, 12)
    assert WeightModel.unit()[BARRIER] == 0 and WeightModel.unit()["COPY"] == 0


def test_exports():
    trace = [T(0, "POTRF", writes=[("A", 0, 0)], reads=[("A", 0, 0)], idx=(0,)),
             T(1, "TRSM", reads=[("A", 0, 0)], writes=[("A", 1, 0)], idx=(1, 0))]
    g = build_from_trace(trace)
    txt = g.to_text(WeightModel.cholesky())
    assert "task 0 POTRF 0 w=1" in txt and "edge 0 1 RAW" in txt
    dot = g.to_dot()
    assert dot.startswith("digraph") and "n0 -> n1" in dot
