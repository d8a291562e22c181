"""Core task-DAG engine.

Tasks carry symbolic tile read/write sets.  A sequential trace is unfolded
into a DAG by data-hazard analysis (RAW, WAR, WAW), exactly the way a
dynamic tile scheduler would do it at runtime.  Only nearest-conflict edges
are materialized per tile; the transitive closure is implied.

On top of the DAG we compute Backflow priorities (remaining longest path),
the weighted critical path, earliest/latest start times on unbounded
processors, and the ALAP activity profile used by the Lost-Area bound.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

# Kernel tags.  BARRIER is a pure synchronization pseudo-task.
POTRF = "POTRF"
TRSM = "TRSM"
SYRK = "SYRK"
GEMM = "GEMM"
TRTRI = "TRTRI"
TRMM = "TRMM"
LAUUM = "LAUUM"
GEQRT = "GEQRT"
TSQRT = "TSQRT"
TTQRT = "TTQRT"
UNMQR = "UNMQR"
TSMQR = "TSMQR"
TTMQR = "TTMQR"
GEADD = "GEADD"
COPY = "COPY"
BARRIER = "BARRIER"

ALL_KINDS = frozenset(
    {POTRF, TRSM, SYRK, GEMM, TRTRI, TRMM, LAUUM, GEQRT, TSQRT, TTQRT,
     UNMQR, TSMQR, TTMQR, GEADD, COPY, BARRIER}
)

RAW = "RAW"
WAR = "WAR"
WAW = "WAW"
EXPLICIT = "EXPLICIT"


class TileRef(NamedTuple):
    """One tile of a symbolic matrix (inputs, results and temporaries get
    distinct matrix names; array renaming relies on that)."""

    matrix: str
    row: int
    col: int


class Task:
    """One kernel invocation on tiles.

    `id` is the ordinal position in the sequential trace; hazard analysis
    relies on ids being strictly increasing in trace order.
    """

    __slots__ = ("id", "kind", "indices", "reads", "writes")

    def __init__(self, id, kind, indices=(), reads=(), writes=()):
        self.id = id
        self.kind = kind
        self.indices = tuple(indices)
        self.reads = tuple(reads)
        self.writes = tuple(writes)

    def __repr__(self):
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind}({idx})#{self.id}"


class WeightModel:
    """Maps kernel kinds to integer durations.

    One weight unit is n_b^3/3 flops for the Cholesky and QR models.
    BARRIER always weighs 0; COPY weighs 0 in the unit and Cholesky models
    (the reference critical-path counts include copies in neither).
    """

    CHOLESKY = {
        POTRF: 1, TRSM: 3, SYRK: 3, GEMM: 6,
        # inversion kernels, same n_b^3/3 unit (TRTRI ~ nb^3/3, TRMM ~ nb^3)
        TRTRI: 1, TRMM: 3, LAUUM: 1,
        COPY: 0, BARRIER: 0,
    }
    QR = {
        GEQRT: 4, TTQRT: 2, UNMQR: 6, TTMQR: 6, TSQRT: 6, TSMQR: 12,
        BARRIER: 0,
    }

    def __init__(self, mode="unit", table=None):
        if mode == "unit":
            table = {k: 1 for k in ALL_KINDS}
            table[BARRIER] = 0
            table[COPY] = 0
        elif mode == "cholesky":
            table = dict(self.CHOLESKY)
        elif mode in ("qr-tt", "qr-full"):
            table = dict(self.QR)
        elif mode == "custom":
            table = dict(table or {})
        else:
            raise ValueError(f"unknown weight mode {mode!r}")
        for kind, w in table.items():
            if kind not in ALL_KINDS:
                raise ValueError(f"unknown kernel kind {kind!r}")
            if not isinstance(w, int) or w < 0:
                raise ValueError(f"weight of {kind} must be a nonnegative integer")
        table[BARRIER] = 0
        self.mode = mode
        self.table = table

    @classmethod
    def unit(cls):
        return cls("unit")

    @classmethod
    def cholesky(cls):
        return cls("cholesky")

    @classmethod
    def qr_tt(cls):
        return cls("qr-tt")

    @classmethod
    def qr_full(cls):
        return cls("qr-full")

    @classmethod
    def custom(cls, table):
        return cls("custom", table)

    def __getitem__(self, kind):
        try:
            return self.table[kind]
        except KeyError:
            raise KeyError(f"weight model {self.mode!r} has no weight for {kind}") from None

    def of(self, task):
        return self[task.kind]


class TaskGraph:
    """An acyclic dependence graph over a task sequence.

    Edges are (from_id, to_id, cause) with cause in {RAW, WAR, WAW,
    EXPLICIT}.  Graphs built from a trace have from_id < to_id on every
    edge.
    """

    def __init__(self, tasks: Sequence[Task], edges):
        self.tasks = list(tasks)
        self.edges = list(edges)
        self._index = {t.id: i for i, t in enumerate(self.tasks)}
        if len(self._index) != len(self.tasks):
            raise ValueError("duplicate task ids")
        self._succ = None
        self._pred = None

    def __len__(self):
        return len(self.tasks)

    def task(self, tid):
        return self.tasks[self._index[tid]]

    def successors(self):
        if self._succ is None:
            succ = {t.id: [] for t in self.tasks}
            for u, v, _ in self.edges:
                succ[u].append(v)
            self._succ = succ
        return self._succ

    def predecessors(self):
        if self._pred is None:
            pred = {t.id: [] for t in self.tasks}
            for u, v, _ in self.edges:
                pred[v].append(u)
            self._pred = pred
        return self._pred

    def topo_order(self):
        """Task ids in topological order; raises on cycles, naming one
        edge that closes a cycle."""
        ids = [t.id for t in self.tasks]
        if all(u < v for u, v, _ in self.edges):
            return ids  # trace-built graphs are already sorted
        indeg = {i: 0 for i in ids}
        for _, v, _ in self.edges:
            indeg[v] += 1
        ready = [i for i in ids if indeg[i] == 0]
        heapq.heapify(ready)
        order = []
        succ = self.successors()
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        if len(order) != len(ids):
            left = {i for i in ids if indeg[i] > 0}
            u, v, _ = next(e for e in self.edges if e[0] in left and e[1] in left)
            raise ValueError(f"cycle detected, e.g. through edge {u}->{v}")
        return order

    def without_war_edges(self):
        return TaskGraph(self.tasks, [e for e in self.edges if e[2] != WAR])

    def transitive_redundant_edges(self):
        """Edges implied by a longer path (flagging only; O(V*E), use on
        small graphs)."""
        succ = self.successors()
        redundant = []
        for u, v, cause in self.edges:
            stack = [w for w in succ[u] if w != v]
            seen = set(stack)
            while stack:
                x = stack.pop()
                if x == v:
                    redundant.append((u, v, cause))
                    break
                for w in succ[x]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return redundant

    # -- text exports ------------------------------------------------------

    def to_text(self, weights: WeightModel):
        lines = []
        for t in self.tasks:
            idx = ",".join(str(i) for i in t.indices)
            lines.append(f"task {t.id} {t.kind} {idx} w={weights.of(t)}")
        for u, v, cause in self.edges:
            lines.append(f"edge {u} {v} {cause}")
        return "\n".join(lines) + "\n"

    def to_dot(self, weights: WeightModel = None):
        out = ["digraph taskgraph {"]
        for t in self.tasks:
            idx = ",".join(str(i) for i in t.indices)
            label = f"{t.kind}({idx})"
            if weights is not None:
                label += f" w={weights.of(t)}"
            out.append(f'  n{t.id} [label="{label}"];')
        for u, v, cause in self.edges:
            style = ' [style=dashed]' if cause in (WAR, WAW) else ""
            out.append(f"  n{u} -> n{v}{style};")
        out.append("}")
        return "\n".join(out) + "\n"


def build_from_trace(trace: Sequence[Task]) -> TaskGraph:
    """Unfold a sequential trace into a DAG using data hazards.

    Per tile, only adjacent conflicting accesses produce edges: RAW from the
    last writer to each subsequent reader, WAR from the readers since the
    last write to the next writer, WAW between consecutive writers with no
    read in between.  A BARRIER task gets EXPLICIT edges from every prior
    task since the previous barrier and to every subsequent task up to the
    next one.
    """
    edges = []
    last_write = {}   # tile -> writer id
    readers = {}      # tile -> list of reader ids since last write
    seen_ids = set()
    prev = None
    barrier = None          # id of the most recent barrier
    since_barrier = []      # ids seen since that barrier
    for t in trace:
        if prev is not None and t.id <= prev:
            raise ValueError(f"task ids must be strictly increasing (got {t.id} after {prev})")
        if t.id in seen_ids:
            raise ValueError(f"duplicate task id {t.id}")
        seen_ids.add(t.id)
        prev = t.id
        if t.kind == BARRIER:
            for u in since_barrier:
                edges.append((u, t.id, EXPLICIT))
            barrier = t.id
            since_barrier = []
            # a barrier cuts every tile chain
            last_write.clear()
            readers.clear()
            continue
        if barrier is not None:
            edges.append((barrier, t.id, EXPLICIT))
        since_barrier.append(t.id)
        for tile in t.reads:
            w = last_write.get(tile)
            if w is not None:
                edges.append((w, t.id, RAW))
            readers.setdefault(tile, []).append(t.id)
        for tile in t.writes:
            rs = readers.get(tile)
            if rs:
                # the reader chain implies the write-write order transitively
                for r in rs:
                    if r != t.id:
                        edges.append((r, t.id, WAR))
            elif tile in last_write:
                edges.append((last_write[tile], t.id, WAW))
            last_write[tile] = t.id
            readers[tile] = []
    # drop duplicate edges, keep first cause
    seen = set()
    uniq = []
    for e in edges:
        key = (e[0], e[1])
        if key not in seen:
            seen.add(key)
            uniq.append(e)
    return TaskGraph(trace, uniq)


@dataclass
class CpAnnotation:
    """Backflow priorities and slack information of a weighted DAG."""

    priority: dict          # task id -> weight + max successor priority
    cp_length: int
    earliest: dict          # earliest start on unbounded processors
    latest: dict            # ALAP start: cp_length - priority

    def critical_ids(self):
        return [i for i in self.priority if self.earliest[i] == self.latest[i]]


def annotate_cp(graph: TaskGraph, weights: WeightModel) -> CpAnnotation:
    """Backflow pass: each task's priority is its remaining longest path
    including its own weight; cp_length is the weighted critical path."""
    order = graph.topo_order()
    w = {t.id: weights.of(t) for t in graph.tasks}
    succ = graph.successors()
    pred = graph.predecessors()
    priority = {}
    for u in reversed(order):
        best = 0
        for v in succ[u]:
            if priority[v] > best:
                best = priority[v]
        priority[u] = w[u] + best
    cp_length = max(priority.values(), default=0)
    earliest = {}
    for u in order:
        est = 0
        for v in pred[u]:
            f = earliest[v] + w[v]
            if f > est:
                est = f
        earliest[u] = est
    latest = {u: cp_length - priority[u] for u in priority}
    return CpAnnotation(priority, cp_length, earliest, latest)


@dataclass
class AlapProfile:
    """Latest-start execution profile on unbounded processors.

    `steps` is the piecewise-constant active-task count as breakpoints
    [(time, count), ...] covering [0, makespan); `t_seq` is the total task
    weight, equal to the area under the profile.
    """

    steps: list
    makespan: int
    t_seq: int

    def active_at(self, time):
        count = 0
        for t, c in self.steps:
            if t > time:
                break
            count = c
        return count

    def area(self):
        total = 0
        for (t0, c), (t1, _) in zip(self.steps, self.steps[1:] + [(self.makespan, 0)]):
            total += c * (t1 - t0)
        return total


def alap_profile(graph: TaskGraph, weights: WeightModel) -> AlapProfile:
    """Profile of the execution where every task starts at its latest
    slack-free time.  Zero-weight tasks occupy no area."""
    ann = annotate_cp(graph, weights)
    deltas = {}
    t_seq = 0
    for t in graph.tasks:
        w = weights.of(t)
        if w == 0:
            continue
        t_seq += w
        s = ann.latest[t.id]
        deltas[s] = deltas.get(s, 0) + 1
        deltas[s + w] = deltas.get(s + w, 0) - 1
    steps = []
    count = 0
    for time in sorted(deltas):
        count += deltas[time]
        if steps and steps[-1][1] == count:
            continue
        steps.append((time, count))
    makespan = ann.cp_length
    if steps and steps[-1][1] == 0 and steps[-1][0] == makespan:
        steps.pop()
    return AlapProfile(steps, makespan, t_seq)


class TraceTimer:
    """Streaming ASAP evaluator: start/finish times of the hazard DAG of a
    trace, computed in one pass without materializing edges.

    Matches build_from_trace + annotate_cp earliest times, including
    BARRIER semantics.
    """

    def __init__(self, weights: WeightModel):
        self.weights = weights
        self.write_fin = {}   # tile -> finish of last write
        self.read_fin = {}    # tile -> max reader finish since last write
        self.floor = 0        # barrier time
        self.max_fin = 0
        self.finish = {}      # task id -> finish

    def add(self, task: Task) -> tuple:
        w = self.weights.of(task)
        if task.kind == BARRIER:
            start = self.max_fin
            self.write_fin.clear()
            self.read_fin.clear()
            self.floor = start
            self.finish[task.id] = start
            return start, start
        start = self.floor
        wf = self.write_fin
        rf = self.read_fin
        for tile in task.reads:
            f = wf.get(tile, 0)
            if f > start:
                start = f
        for tile in task.writes:
            f = wf.get(tile, 0)
            if f > start:
                start = f
            f = rf.get(tile, 0)
            if f > start:
                start = f
        fin = start + w
        for tile in task.reads:
            if rf.get(tile, 0) < fin:
                rf[tile] = fin
        for tile in task.writes:
            wf[tile] = fin
            rf[tile] = 0
        if fin > self.max_fin:
            self.max_fin = fin
        self.finish[task.id] = fin
        return start, fin


def asap_times(trace: Iterable[Task], weights: WeightModel):
    """(finish times by id, cp) of a trace under unbounded processors."""
    timer = TraceTimer(weights)
    for t in trace:
        timer.add(t)
    return timer.finish, timer.max_fin


def trace_cp(trace: Iterable[Task], weights: WeightModel) -> int:
    return asap_times(trace, weights)[1]


def t_seq(trace: Iterable[Task], weights: WeightModel) -> int:
    return sum(weights.of(t) for t in trace)
