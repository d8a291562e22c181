"""Bounded-processor scheduling and performance bounds.

List scheduling with Backflow priorities (max/min/seeded-random policies),
barrier-synchronized Cholesky schedules, the ALAP-derived Lost-Area bound
and the Rooftop bound, the (2-1/p) list-scheduling guarantee, and the
search for the smallest processor count that still attains the critical
path.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction

from . import cholesky
from .taskgraph import (
    BARRIER, TaskGraph, WeightModel, alap_profile, annotate_cp,
    build_from_trace,
)

MAX_CP = "max"
MIN_CP = "min"
RANDOM_CP = "random"


@dataclass
class Schedule:
    """Processor/time assignment of every task of a graph."""

    assignment: dict        # task id -> (processor, start)
    makespan: int
    p: int

    def gantt_rows(self, graph: TaskGraph, weights: WeightModel):
        rows = []
        for t in graph.tasks:
            proc, start = self.assignment[t.id]
            idx = list(t.indices) + [""] * (3 - len(t.indices))
            rows.append((proc, start, start + weights.of(t), t.kind, *idx[:3]))
        rows.sort(key=lambda r: (r[0], r[1], r[3]))
        return rows

    def to_csv(self, graph: TaskGraph, weights: WeightModel):
        lines = ["proc,start,end,kind,i,j,k"]
        for row in self.gantt_rows(graph, weights):
            lines.append(",".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


def check_schedule(graph: TaskGraph, weights: WeightModel, sched: Schedule):
    """Post-hoc validity: all tasks assigned, no overlap on a processor,
    every edge's source finishes before its sink starts."""
    fin = {}
    per_proc = {}
    for t in graph.tasks:
        if t.id not in sched.assignment:
            raise AssertionError(f"task {t.id} unassigned")
        proc, start = sched.assignment[t.id]
        w = weights.of(t)
        fin[t.id] = start + w
        if w > 0:
            per_proc.setdefault(proc, []).append((start, start + w, t.id))
    for proc, spans in per_proc.items():
        spans.sort()
        for (s1, e1, a), (s2, e2, b) in zip(spans, spans[1:]):
            if s2 < e1:
                raise AssertionError(f"overlap on processor {proc}: tasks {a} and {b}")
    starts = {t: ps[1] for t, ps in sched.assignment.items()}
    for u, v, _ in graph.edges:
        if fin[u] > starts[v]:
            raise AssertionError(f"precedence violated on edge {u}->{v}")
    return True


def list_schedule(graph: TaskGraph, weights: WeightModel, p: int,
                  policy: str = MAX_CP, seed: int = 0,
                  annotation=None) -> Schedule:
    """Greedy list scheduling: whenever a processor is idle and tasks are
    ready, start one chosen by policy (highest priority, lowest priority,
    or seeded-uniform random); equal priorities break toward the lowest
    task id.  Zero-weight tasks complete at their ready time without
    occupying a processor.
    """
    if p < 1:
        raise ValueError("need at least one processor")
    if policy not in (MAX_CP, MIN_CP, RANDOM_CP):
        raise ValueError(f"unknown policy {policy!r}")
    ann = annotation or annotate_cp(graph, weights)
    rng = random.Random(seed)
    pred = graph.predecessors()
    succ = graph.successors()
    indeg = {t.id: len(pred[t.id]) for t in graph.tasks}
    w = {t.id: weights.of(t) for t in graph.tasks}
    prio = ann.priority

    ready = []   # heap keyed by policy
    def push(tid):
        if w[tid] == 0:
            zero_ready.append(tid)
        elif policy == MAX_CP:
            heapq.heappush(ready, (-prio[tid], tid))
        elif policy == MIN_CP:
            heapq.heappush(ready, (prio[tid], tid))
        else:
            ready.append(tid)

    zero_ready = []
    assignment = {}
    running = []  # (finish, proc, tid)
    free = list(range(p))
    now = 0
    done = 0
    total = len(graph.tasks)
    for t in graph.tasks:
        if indeg[t.id] == 0:
            push(t.id)
    while done < total:
        # zero-weight tasks finish instantly and may release successors
        while zero_ready:
            tid = zero_ready.pop()
            assignment[tid] = (0, now)
            done += 1
            for v in succ[tid]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    push(v)
        while free and ready:
            if policy == RANDOM_CP:
                n = rng.randrange(len(ready))
                ready[n], ready[-1] = ready[-1], ready[n]
                tid = ready.pop()
            else:
                _, tid = heapq.heappop(ready)
            proc = free.pop()
            assignment[tid] = (proc, now)
            heapq.heappush(running, (now + w[tid], proc, tid))
            done += 1
        if zero_ready:
            continue
        if done == total and not running:
            break
        if not running:
            raise AssertionError("deadlock: no running task but work remains")
        now = running[0][0]
        while running and running[0][0] == now:
            _, proc, tid = heapq.heappop(running)
            free.append(proc)
            for v in succ[tid]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    push(v)
        free.sort()
    makespan = max((assignment[t.id][1] + w[t.id] for t in graph.tasks), default=0)
    return Schedule(assignment, makespan, p)


def sync_chol_schedule(t: int, p: int, variant: str = "relaxed") -> Schedule:
    """Right-looking Cholesky with barrier-synchronized phases.

    grouped: barriers after the POTRF, TRSM, GEMM and SYRK phases of every
    column; relaxed: GEMMs and SYRKs form one phase and the next POTRF may
    run inside it (no barrier between the update and the factorization it
    enables).  With p >= ceil((t-1)^2/2), relaxed attains makespan 9t-10.
    """
    if t < 2:
        raise ValueError("need t >= 2")
    graph, weights = sync_chol_graph(t, variant)
    sched = list_schedule(graph, weights, p, MAX_CP)
    return sched


def sync_chol_graph(t: int, variant: str = "relaxed"):
    from .taskgraph import GEMM, POTRF, SYRK, TRSM, Task

    if variant not in ("grouped", "relaxed"):
        raise ValueError(f"unknown variant {variant!r}")
    trace = cholesky.gen_chol_fact(t, "right")
    out = []
    n = 0

    def emit(task):
        nonlocal n
        out.append(Task(n, task.kind, task.indices, task.reads, task.writes))
        n += 1

    def barrier():
        nonlocal n
        out.append(Task(n, BARRIER, (), (), ()))
        n += 1

    pos = 0
    for k in range(t):
        potrf = trace[pos]; pos += 1
        emit(potrf)
        barrier()
        trsms = []
        while pos < len(trace) and trace[pos].kind == TRSM and trace[pos].indices[1] == k:
            trsms.append(trace[pos]); pos += 1
        updates = []
        while pos < len(trace) and trace[pos].kind in (SYRK, GEMM) and trace[pos].indices[-1] == k:
            updates.append(trace[pos]); pos += 1
        if trsms:
            for task in trsms:
                emit(task)
            barrier()
        if variant == "grouped":
            gemms = [u for u in updates if u.kind == GEMM]
            syrks = [u for u in updates if u.kind == SYRK]
            if gemms:
                for task in gemms:
                    emit(task)
                barrier()
            if syrks:
                for task in syrks:
                    emit(task)
                barrier()
        else:
            for task in updates:
                emit(task)
            # no trailing barrier: the next POTRF overlaps the update phase
    graph = build_from_trace(out)
    return graph, WeightModel.cholesky()


# ---------------------------------------------------------------------------
# bounds

def lost_area(profile, p: int) -> int:
    """Idle area of the ALAP tail for p processors.

    Stepping backwards from the end, stop at the latest instant where the
    profile needs more than p processors; the lost area is the idle area
    p - active(t) over the remaining tail (the whole timeline if p is
    never exceeded, which collapses the derived bound to the cp).
    """
    if p < 1:
        raise ValueError("need p >= 1")
    steps = profile.steps + [(profile.makespan, 0)]
    tail = 0
    area = 0
    for (t0, c), (t1, _) in zip(steps, steps[1:]):
        if t1 <= t0:
            continue
        if c > p:
            tail = t1
    for (t0, c), (t1, _) in zip(steps, steps[1:]):
        lo = max(t0, tail)
        if t1 > lo:
            area += (p - c) * (t1 - lo)
    return area


def alap_bound(graph: TaskGraph, weights: WeightModel, p: int) -> Fraction:
    """ALAP-derived performance bound max(cp, (T_seq + LA_p)/p)."""
    profile = alap_profile(graph, weights)
    la = lost_area(profile, p)
    return max(Fraction(profile.makespan), Fraction(profile.t_seq + la, p))


def rooftop_bound(graph: TaskGraph, weights: WeightModel, p: int) -> Fraction:
    """Perfect speedup until the critical path: max(cp, T_seq/p)."""
    if p < 1:
        raise ValueError("need p >= 1")
    ann = annotate_cp(graph, weights)
    t_seq = sum(weights.of(t) for t in graph.tasks)
    return max(Fraction(ann.cp_length), Fraction(t_seq, p))


def lower_bound_factor(makespan, p: int) -> Fraction:
    """Lower bound on the optimal makespan implied by any list schedule:
    observed / (2 - 1/p)."""
    if p < 1:
        raise ValueError("need p >= 1")
    return Fraction(makespan) / (2 - Fraction(1, p))


def gamma_ub(gamma_seq, total_flops, cp, procs) -> Fraction:
    """Roofline-style upper bound on performance:
    gamma_seq * T / max(T/P, cp)."""
    t = Fraction(total_flops)
    denom = max(t / procs, Fraction(cp))
    return Fraction(gamma_seq) * t / denom


@dataclass
class BoundsRow:
    p: int
    lost_area: int
    t_alap: Fraction
    t_roof: Fraction
    speedup: Fraction
    efficiency: Fraction


def bounds_table(graph: TaskGraph, weights: WeightModel, procs) -> list:
    """Per-processor-count Lost Area, ALAP/Rooftop bounds, speedup and
    efficiency (speedup = T_seq / T_alap, efficiency = speedup/p)."""
    profile = alap_profile(graph, weights)
    t_seq = profile.t_seq
    cp = profile.makespan
    rows = []
    for p in procs:
        la = lost_area(profile, p)
        t_alap = max(Fraction(cp), Fraction(t_seq + la, p))
        t_roof = max(Fraction(cp), Fraction(t_seq, p))
        s = Fraction(t_seq) / t_alap
        rows.append(BoundsRow(p, la, t_alap, t_roof, s, s / p))
    return rows


def alpha_min(t: int, p_cap=None):
    """Smallest processor count whose max-priority list schedule attains
    the weighted critical path 9t-10; alpha = p_opt / t^2.

    The reference procedure is unstated; this ascending search over the
    CP-method schedule is one faithful reading.
    """
    if t < 3:
        raise ValueError("need t >= 3")
    trace = cholesky.gen_chol_fact(t, "right")
    graph = build_from_trace(trace)
    weights = WeightModel.cholesky()
    ann = annotate_cp(graph, weights)
    target = 9 * t - 10
    assert ann.cp_length == target
    cap = p_cap or (t - 1) ** 2
    for p in range(1, cap + 1):
        ms = list_schedule(graph, weights, p, MAX_CP, annotation=ann).makespan
        if ms == target:
            return p, Fraction(p, t * t)
    raise AssertionError(f"no processor count up to {cap} attains the critical path")
