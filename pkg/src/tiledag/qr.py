"""Tiled QR factorization under arbitrary elimination trees.

Coarse-grain schedulers (Sameh-Kuck/FlatTree, Fibonacci, Greedy) produce
per-tile time-step tables and elimination lists; any valid elimination list
translates into a tiled task graph over TT or TS kernels.  The tiled graphs
are timed directly during construction (unbounded-processor ASAP), which
also yields the zeroed-time tables and critical paths of the reference
tables.  Asap and GrASAP are event-driven constructions where eliminations
fire the instant two rows of a column hold triangles.

Rows and columns are 1-based throughout, matching the reference tables.
"""

from __future__ import annotations

import heapq
from bisect import insort
from dataclasses import dataclass
from math import ceil

from .taskgraph import (
    GEQRT, TSMQR, TSQRT, TTMQR, TTQRT, UNMQR,
    Task, TileRef, WeightModel,
)

COARSE_ALGOS = ("sameh-kuck", "fibonacci", "greedy")
TREE_ALGOS = ("flattree", "fibonacci", "greedy", "binarytree", "plasmatree",
              "asap", "grasap")


@dataclass(frozen=True)
class ElimEntry:
    """elim(i, piv, k): zero tile (i,k) by combining rows i and piv."""

    i: int
    piv: int
    k: int
    step: int = 0


class EliminationList:
    """Ordered eliminations zeroing every sub-diagonal tile of a p x q
    tiled matrix."""

    def __init__(self, p, q, entries):
        self.p = p
        self.q = q
        self.entries = list(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def validate(self):
        """Raise ValueError citing the violated validity condition."""
        p, q = self.p, self.q
        zeroed = set()   # (row, col) pairs already annihilated
        for n, e in enumerate(self.entries):
            if not (1 <= e.k <= min(p, q)) or not (e.k < e.i <= p):
                raise ValueError(f"entry {n}: elim({e.i},{e.piv},{e.k}) out of range")
            if e.i == e.piv:
                raise ValueError(f"entry {n}: a row cannot annihilate itself")
            if not (e.k <= e.piv <= p):
                raise ValueError(f"entry {n}: pivot row {e.piv} invalid for column {e.k}")
            for row in (e.i, e.piv):
                for kk in range(1, e.k):
                    if (row, kk) not in zeroed:
                        raise ValueError(
                            f"entry {n}: row {row} not ready for column {e.k} "
                            f"(tile ({row},{kk}) not yet zeroed)")
            if (e.piv, e.k) in zeroed:
                raise ValueError(
                    f"entry {n}: pivot row {e.piv} is not a potential annihilator "
                    f"(tile ({e.piv},{e.k}) already zeroed)")
            if (e.i, e.k) in zeroed:
                raise ValueError(f"entry {n}: tile ({e.i},{e.k}) zeroed twice")
            zeroed.add((e.i, e.k))
        want = sum(p - k for k in range(1, min(p, q) + 1))
        if len(zeroed) != want:
            raise ValueError(f"elimination list incomplete: {len(zeroed)}/{want} tiles zeroed")
        return True

    def normalized(self):
        """Equivalent list with i > piv everywhere.

        Reverse eliminations are removed column by column by exchanging the
        roles of the two rows (the surviving row inherits the dying row's
        remaining pivot duties).  Coarse time-steps are preserved; weighted
        tiled times are preserved wherever the exchanged rows carry the
        same update history into later columns.
        """
        entries = list(self.entries)
        for k0 in range(1, min(self.p, self.q) + 1):
            while True:
                rev = [(n, e) for n, e in enumerate(entries)
                       if e.k == k0 and e.i < e.piv]
                if not rev:
                    break
                i0 = max(max(e.i, e.piv) for _, e in rev)
                first = next(n for n, e in rev if e.piv == i0)
                i1 = entries[first].i
                own = next(n for n, e in enumerate(entries)
                           if e.k == k0 and e.i == i0)
                new = list(entries)
                new[first] = ElimEntry(i0, i1, k0, entries[first].step)
                # i1 takes over every later pivot duty of i0 in this column
                for n in range(first + 1, len(entries)):
                    e = entries[n]
                    if e.k == k0 and e.piv == i0 and n != own:
                        new[n] = ElimEntry(e.i, i1, k0, e.step)
                e = entries[own]
                new[own] = ElimEntry(i1, e.piv, k0, e.step)
                entries = new
        return EliminationList(self.p, self.q, entries)

    def with_steps(self):
        """Recompute coarse time-steps: each elimination occupies both of
        its rows for one unit."""
        last = {}
        out = []
        for e in self.entries:
            s = max(last.get(e.i, 0), last.get(e.piv, 0)) + 1
            last[e.i] = last[e.piv] = s
            out.append(ElimEntry(e.i, e.piv, e.k, s))
        return EliminationList(self.p, self.q, out)

    def to_csv(self):
        lines = ["k,i,piv,step"]
        for e in self.entries:
            lines.append(f"{e.k},{e.i},{e.piv},{e.step}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, p, q, text):
        entries = []
        for line in text.strip().splitlines()[1:]:
            k, i, piv, step = (int(x) for x in line.split(","))
            entries.append(ElimEntry(i, piv, k, step))
        return cls(p, q, entries)


class CoarseTable:
    """Per-tile coarse time steps: coarse(i,k) is the unit-cost step at
    which tile (i,k) is zeroed."""

    def __init__(self, p, q, steps, algo="", x=None):
        self.p = p
        self.q = q
        self.steps = dict(steps)
        self.algo = algo
        self.x = x

    def __call__(self, i, k):
        return self.steps[(i, k)]

    def cp(self):
        return max(self.steps.values(), default=0)

    def groups(self):
        """(step, col) -> sorted rows zeroed together."""
        g = {}
        for (i, k), s in self.steps.items():
            g.setdefault((s, k), []).append(i)
        return {key: sorted(rows) for key, rows in g.items()}

    def validate(self, elim: EliminationList):
        """The dependency relations of the coarse model: a tile's own and
        its pivot's previous-column eliminations precede it, and the
        elimination order within a column follows the algorithm's sweep
        (downward for the panel scheme, bottom-up otherwise)."""
        for e in elim:
            s = self.steps[(e.i, e.k)]
            if e.k > 1:
                if self.steps[(e.i, e.k - 1)] >= s:
                    raise ValueError(f"coarse dependency violated: own row at ({e.i},{e.k})")
                if e.piv > e.k - 1 and self.steps[(e.piv, e.k - 1)] >= s:
                    raise ValueError(f"coarse dependency violated: pivot row at ({e.i},{e.k})")
        for k in range(1, min(self.p, self.q) + 1):
            col = [self.steps[(i, k)] for i in range(k + 1, self.p + 1)]
            if self.algo == "sameh-kuck":
                ok = all(a < b for a, b in zip(col, col[1:]))
            else:
                ok = all(a >= b for a, b in zip(col, col[1:]))
            if not ok:
                raise ValueError(f"column {k} violates the {self.algo} sweep order")
        return True

    def to_csv(self):
        lines = ["i\\k," + ",".join(str(k) for k in range(1, self.q + 1))]
        for i in range(1, self.p + 1):
            row = []
            for k in range(1, self.q + 1):
                row.append(str(self.steps.get((i, k), "")))
            lines.append(f"{i}," + ",".join(row))
        return "\n".join(lines) + "\n"


def fibonacci_x(p):
    """Least x with x(x+1)/2 >= p-1."""
    x = 0
    while x * (x + 1) // 2 < p - 1:
        x += 1
    return x


def _pair_groups(col_rows_by_step):
    """Fibonacci/Greedy pairing: a bunch of z consecutive tiles zeroed at
    one step uses the z rows immediately above, paired in natural order."""
    entries = []
    for (s, k), rows in sorted(col_rows_by_step.items()):
        z = len(rows)
        if rows != list(range(rows[0], rows[0] + z)):
            raise AssertionError(f"step {s} column {k}: group {rows} not consecutive")
        for j, i in enumerate(rows):
            entries.append(ElimEntry(i, rows[0] - z + j, k, s))
    return entries


def _coarse_sameh_kuck(p, q):
    steps = {}
    entries = []
    for k in range(1, min(p, q) + 1):
        for i in range(k + 1, p + 1):
            prev_col = steps.get((i, k - 1), 0)
            above = steps.get((i - 1, k), 0)
            s = max(prev_col, above) + 1
            steps[(i, k)] = s
            entries.append(ElimEntry(i, k, k, s))
    entries.sort(key=lambda e: (e.step, e.k, e.i))
    return steps, entries


def _coarse_fibonacci(p, q):
    x = fibonacci_x(p)
    steps = {}
    for i in range(2, p + 1):
        y = 1
        while i > y * (y + 1) // 2 + 1:
            y += 1
        steps[(i, 1)] = x - y + 1
    for k in range(2, min(p, q) + 1):
        for i in range(k + 1, p + 1):
            steps[(i, k)] = steps[(i - 1, k - 1)] + 2
    groups = {}
    for (i, k), s in steps.items():
        groups.setdefault((s, k), []).append(i)
    entries = _pair_groups({key: sorted(v) for key, v in groups.items()})
    entries.sort(key=lambda e: (e.step, e.k, e.i))
    return steps, entries, x


def _coarse_greedy(p, q):
    steps = {}
    qq = min(p, q)
    remaining = sum(p - k for k in range(1, qq + 1))
    s = 0
    while remaining:
        s += 1
        for k in range(1, qq + 1):
            avail = [i for i in range(k, p + 1)
                     if (i, k) not in steps and i > k - 1
                     and (k == 1 or steps.get((i, k - 1), s) <= s - 1)]
            z = len(avail) // 2
            if z == 0:
                continue
            for i in avail[-z:]:
                steps[(i, k)] = s
            remaining -= z
    groups = {}
    for (i, k), st in steps.items():
        groups.setdefault((st, k), []).append(i)
    entries = _pair_groups({key: sorted(v) for key, v in groups.items()})
    entries.sort(key=lambda e: (e.step, e.k, e.i))
    return steps, entries


def coarse_schedule(p, q, algo):
    """Coarse time-step table plus elimination list for one of the three
    classical schemes."""
    if not (p >= q >= 1):
        raise ValueError("need p >= q >= 1")
    algo = algo.lower()
    x = None
    if algo in ("sameh-kuck", "samehkuck", "flattree"):
        steps, entries = _coarse_sameh_kuck(p, q)
        algo = "sameh-kuck"
    elif algo == "fibonacci":
        steps, entries, x = _coarse_fibonacci(p, q)
    elif algo == "greedy":
        steps, entries = _coarse_greedy(p, q)
    else:
        raise ValueError(f"unknown coarse algorithm {algo!r}")
    table = CoarseTable(p, q, steps, algo, x if x is not None else fibonacci_x(p))
    elim = EliminationList(p, q, entries)
    return table, elim


def eager_coarse(elim: EliminationList) -> CoarseTable:
    """Coarse table of the dependence-driven re-execution of a list: each
    elimination fires one step after the last use of either of its rows.
    Coincides with the scheduled tables of the busy algorithms (Sameh-Kuck,
    Greedy); Fibonacci's shifted pattern can idle on small instances."""
    steps = {(e.i, e.k): e.step for e in elim.with_steps()}
    return CoarseTable(elim.p, elim.q, steps, "eager")


def coarse_cp_oracle(p, q, algo):
    """Closed-form coarse critical paths (Greedy has none and is read off
    the constructed table)."""
    if not (p >= q >= 1):
        raise ValueError("need p >= q >= 1")
    algo = algo.lower()
    if algo in ("sameh-kuck", "samehkuck", "flattree"):
        if p == q:
            return 2 * q - 3 if q > 1 else 0
        return p + q - 2
    if algo == "fibonacci":
        x = fibonacci_x(p)
        if p == q:
            return x + 2 * q - 4 if q > 1 else 0
        return x + 2 * q - 2
    if algo == "greedy":
        return coarse_schedule(p, q, "greedy")[0].cp()
    raise ValueError(f"unknown coarse algorithm {algo!r}")


# ---------------------------------------------------------------------------
# fixed elimination trees beyond the coarse three

def flat_tree_list(p, q):
    return coarse_schedule(p, q, "sameh-kuck")[1]


def plasmatree_list(p, q, bs):
    """PLASMA's parameterized tree: flat trees inside domains of bs
    consecutive rows (the bottom domain shrinks as columns advance), domain
    heads merged by a binary tree.  bs=1 is BinaryTree, bs=p is FlatTree."""
    if not (1 <= bs <= p):
        raise ValueError("domain size must satisfy 1 <= BS <= p")
    entries = []
    for k in range(1, min(p, q) + 1):
        rows = list(range(k, p + 1))
        heads = []
        for lo in range(0, len(rows), bs):
            dom = rows[lo:lo + bs]
            heads.append(dom[0])
            for i in dom[1:]:
                entries.append(ElimEntry(i, dom[0], k))
        level = heads
        while len(level) > 1:
            nxt = []
            for a in range(0, len(level) - 1, 2):
                entries.append(ElimEntry(level[a + 1], level[a], k))
                nxt.append(level[a])
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
    elim = EliminationList(p, q, entries).with_steps()
    elim.entries.sort(key=lambda e: (e.k, e.step, e.i))
    return elim


def binary_tree_list(p, q):
    return plasmatree_list(p, q, 1)


# ---------------------------------------------------------------------------
# tiled builder

def _tile(m, i, j):
    return TileRef(m, i, j)


class QrBuild:
    """Tiled QR task graph with unbounded-processor ASAP times computed
    during construction.

    zeroed[(i,k)] is the finish time of the kernel annihilating tile (i,k)
    (the zeroed-time tables); cp is the overall critical path.
    With keep_trace the full Task trace is retained; record_updates keeps
    per-update TTMQR finish times for the translation theorem checks.
    """

    def __init__(self, p, q, family="TT", weights=None, keep_trace=True,
                 record_updates=False):
        if not (p >= q >= 1):
            raise ValueError("need p >= q >= 1")
        if family not in ("TT", "TS"):
            raise ValueError("kernel family must be 'TT' or 'TS'")
        self.p = p
        self.q = q
        self.family = family
        self.weights = weights if weights is not None else WeightModel.qr_tt()
        self.trace = [] if keep_trace else None
        self.record_updates = record_updates
        self.zeroed = {}
        self.updates = {}          # (i,k) -> {j: TTMQR finish}
        self.cp = 0
        self.counts = {GEQRT: 0, TTQRT: 0, TSQRT: 0, UNMQR: 0, TTMQR: 0, TSMQR: 0}
        self.total_weight = 0
        self.elim = None
        self._R = {}   # (i,k) -> finish of last write to the triangle
        self._V = {}   # (i,k) -> GEQRT finish (reflectors)
        self._VE = {}  # (i,k) -> elimination-kernel finish (TT/TS reflectors)
        self._D = {}   # (i,j) -> finish of last write to the data tile
        self._tri = set()

    def _rec(self, kind, idx, reads, writes, start):
        w = self.weights[kind]
        fin = start + w
        self.counts[kind] += 1
        self.total_weight += w
        if fin > self.cp:
            self.cp = fin
        if self.trace is not None:
            self.trace.append(Task(len(self.trace), kind, idx, reads, writes))
        return fin

    def geqrt(self, i, k):
        start = self._D.get((i, k), 0)
        fin = self._rec(GEQRT, (i, k),
                        [_tile("D", i, k)], [_tile("R", i, k), _tile("V", i, k)],
                        start)
        self._R[(i, k)] = fin
        self._V[(i, k)] = fin
        self._tri.add((i, k))
        return fin

    def unmqr(self, i, k, j):
        start = max(self._V[(i, k)], self._D.get((i, j), 0))
        fin = self._rec(UNMQR, (i, k, j),
                        [_tile("V", i, k), _tile("D", i, j)], [_tile("D", i, j)],
                        start)
        self._D[(i, j)] = fin
        return fin

    def ttqrt(self, i, piv, k):
        start = max(self._R[(i, k)], self._R[(piv, k)])
        fin = self._rec(TTQRT, (i, piv, k),
                        [_tile("R", i, k), _tile("R", piv, k)],
                        [_tile("R", piv, k), _tile("T", i, k)],
                        start)
        self._R[(piv, k)] = fin
        self._VE[(i, k)] = fin
        self.zeroed[(i, k)] = fin
        return fin

    def ttmqr(self, i, piv, k, j):
        start = max(self._VE[(i, k)], self._D.get((i, j), 0), self._D.get((piv, j), 0))
        fin = self._rec(TTMQR, (i, piv, k, j),
                        [_tile("T", i, k), _tile("D", i, j), _tile("D", piv, j)],
                        [_tile("D", i, j), _tile("D", piv, j)],
                        start)
        self._D[(i, j)] = fin
        self._D[(piv, j)] = fin
        if self.record_updates:
            self.updates.setdefault((i, k), {})[j] = fin
        return fin

    def tsqrt(self, i, piv, k):
        start = max(self._D.get((i, k), 0), self._R[(piv, k)])
        fin = self._rec(TSQRT, (i, piv, k),
                        [_tile("D", i, k), _tile("R", piv, k)],
                        [_tile("R", piv, k), _tile("S", i, k)],
                        start)
        self._R[(piv, k)] = fin
        self._VE[(i, k)] = fin
        self.zeroed[(i, k)] = fin
        return fin

    def tsmqr(self, i, piv, k, j):
        start = max(self._VE[(i, k)], self._D.get((i, j), 0), self._D.get((piv, j), 0))
        fin = self._rec(TSMQR, (i, piv, k, j),
                        [_tile("S", i, k), _tile("D", i, j), _tile("D", piv, j)],
                        [_tile("D", i, j), _tile("D", piv, j)],
                        start)
        self._D[(i, j)] = fin
        self._D[(piv, j)] = fin
        return fin

    # -- bundles -----------------------------------------------------------

    def _triangularize(self, i, k):
        self.geqrt(i, k)
        for j in range(k + 1, self.q + 1):
            self.unmqr(i, k, j)

    def preprocess_tt(self):
        for i in range(1, self.p + 1):
            self._triangularize(i, 1)

    def elim_tt(self, i, piv, k):
        """TT elimination bundle: zero (i,k), update both rows, then move
        row i into the next column as a fresh triangle."""
        fin = self.ttqrt(i, piv, k)
        for j in range(k + 1, self.q + 1):
            self.ttmqr(i, piv, k, j)
        if k + 1 <= self.q:
            self._triangularize(i, k + 1)
        return fin

    def elim_ts(self, i, piv, k):
        """TS elimination bundle: pivots are triangularized lazily on first
        use; a target that already holds a triangle (an ex-pivot) falls
        back to the TT kernels."""
        if (piv, k) not in self._tri:
            self._triangularize(piv, k)
        if (i, k) in self._tri:
            fin = self.ttqrt(i, piv, k)
            for j in range(k + 1, self.q + 1):
                self.ttmqr(i, piv, k, j)
        else:
            fin = self.tsqrt(i, piv, k)
            for j in range(k + 1, self.q + 1):
                self.tsmqr(i, piv, k, j)
        return fin

    def run_list(self, elim: EliminationList):
        self.elim = elim
        if self.family == "TT":
            self.preprocess_tt()
            for e in elim:
                self.elim_tt(e.i, e.piv, e.k)
        else:
            for e in elim:
                self.elim_ts(e.i, e.piv, e.k)
            for k in range(1, self.q + 1):
                if (k, k) not in self._tri:
                    self._triangularize(k, k)
        return self


def tiled_build(elim: EliminationList, family="TT", weights=None,
                keep_trace=True, record_updates=False, validate=True) -> QrBuild:
    if validate:
        elim.validate()
    b = QrBuild(elim.p, elim.q, family, weights, keep_trace, record_updates)
    return b.run_list(elim)


def tiled_graph(elim: EliminationList, family="TT"):
    """Task trace of the tiled translation of an elimination list."""
    return tiled_build(elim, family).trace


# ---------------------------------------------------------------------------
# event-driven Asap / GrASAP

def _run_asap_columns(build: QrBuild, first_col, seeds):
    """Fire eliminations the moment a column holds two ready triangles.

    seeds are (time, col, row) availability events; when s eliminations can
    start in a column, the bottom 2s ready rows pair up exactly as
    Fibonacci and Greedy pair them.
    """
    q = build.q
    avail = {k: [] for k in range(first_col, q + 1)}
    heap = list(seeds)
    heapq.heapify(heap)
    entries = []
    while heap:
        now = heap[0][0]
        touched = set()
        while heap and heap[0][0] == now:
            _, k, row = heapq.heappop(heap)
            insort(avail[k], row)
            touched.add(k)
        for k in sorted(touched):
            rows = avail[k]
            s = len(rows) // 2
            if s == 0:
                continue
            part = rows[len(rows) - 2 * s:]
            del rows[len(rows) - 2 * s:]
            for piv, tgt in zip(part[:s], part[s:]):
                fin = build.elim_tt(tgt, piv, k)
                entries.append(ElimEntry(tgt, piv, k))
                heapq.heappush(heap, (fin, k, piv))
                if k + 1 <= q:
                    heapq.heappush(heap, (build._V[(tgt, k + 1)], k + 1, tgt))
    return entries


def asap_build(p, q, weights=None, keep_trace=True, record_updates=False) -> QrBuild:
    b = QrBuild(p, q, "TT", weights, keep_trace, record_updates)
    b.preprocess_tt()
    seeds = [(b._V[(i, 1)], 1, i) for i in range(1, p + 1)]
    entries = _run_asap_columns(b, 1, seeds)
    b.elim = EliminationList(p, q, entries).with_steps()
    return b


def grasap_build(p, q, i=1, weights=None, keep_trace=True, record_updates=False) -> QrBuild:
    """Greedy on the first q-i columns, Asap on the trailing i."""
    if not (1 <= i <= q):
        raise ValueError("need 1 <= i <= q")
    if i == q:
        return asap_build(p, q, weights, keep_trace, record_updates)
    b = QrBuild(p, q, "TT", weights, keep_trace, record_updates)
    b.preprocess_tt()
    _, greedy = coarse_schedule(p, q, "greedy")
    static = [e for e in greedy if e.k <= q - i]
    for e in static:
        b.elim_tt(e.i, e.piv, e.k)
    first_dyn = q - i + 1
    seeds = [(b._V[(r, first_dyn)], first_dyn, r) for r in range(first_dyn, p + 1)]
    dyn = _run_asap_columns(b, first_dyn, seeds)
    b.elim = EliminationList(p, q, static + dyn).with_steps()
    return b


def asap_graph(p, q):
    return asap_build(p, q).trace


def grasap_graph(p, q, i=1):
    return grasap_build(p, q, i).trace


def build_tree(p, q, algo, family="TT", bs=None, grasap_i=1, weights=None,
               keep_trace=True, record_updates=False) -> QrBuild:
    """One-stop construction of any of the studied elimination trees."""
    algo = algo.lower()
    if algo == "asap":
        if family != "TT":
            raise ValueError("Asap is defined over TT kernels")
        return asap_build(p, q, weights, keep_trace, record_updates)
    if algo == "grasap":
        if family != "TT":
            raise ValueError("GrASAP is defined over TT kernels")
        return grasap_build(p, q, grasap_i, weights, keep_trace, record_updates)
    if algo in ("flattree", "sameh-kuck", "samehkuck"):
        elim = flat_tree_list(p, q)
    elif algo in ("fibonacci", "greedy"):
        elim = coarse_schedule(p, q, algo)[1]
    elif algo == "binarytree":
        elim = binary_tree_list(p, q)
    elif algo == "plasmatree":
        if bs is None:
            raise ValueError("plasmatree needs a domain size bs")
        elim = plasmatree_list(p, q, bs)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    b = QrBuild(p, q, family, weights, keep_trace, record_updates)
    b.run_list(elim)
    b.elim = elim
    return b


def zeroed_table_csv(build: QrBuild):
    lines = ["i\\k," + ",".join(str(k) for k in range(1, build.q + 1))]
    for i in range(1, build.p + 1):
        row = [str(build.zeroed.get((i, k), "")) for k in range(1, build.q + 1)]
        lines.append(f"{i}," + ",".join(row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# closed forms and conservation

def total_weight(p, q):
    """Invariant total task weight of any tiled QR of a p x q matrix."""
    if not (p >= q >= 1):
        raise ValueError("need p >= q >= 1")
    return 6 * p * q * q - 2 * q ** 3


def verify_weight(build: QrBuild):
    return build.total_weight == total_weight(build.p, build.q)


def elim_weight(q, k):
    """Flop weight attributable to one elimination in column k, identical
    for the TS and TT kernel bundles."""
    return 10 + 18 * (q - k)


def flattree_cp_oracle(p, q):
    if not (p >= q >= 1):
        raise ValueError("need p >= q >= 1")
    if q == 1:
        return 2 * p + 2
    if p == q:
        return 22 * p - 24
    return 6 * p + 16 * q - 22


def sk_coarse_closed_form(p, q):
    """coarse(p,q) of Sameh-Kuck: 0 for q<1 and p=q=1, p+q-2 for p>q,
    2p-3 for p=q>1."""
    if q < 1 or (p == q == 1):
        return 0
    if p == q:
        return 2 * p - 3
    return p + q - 2


def flattree_cp_composed(p, q):
    c1 = sk_coarse_closed_form(p, q - 1)
    c2 = sk_coarse_closed_form(p, q)
    return 10 * (q - 1) + 6 * c1 + 4 + 2 * (c2 - c1)


def fibonacci_cp_bounds(p, q):
    """(low, high) with the simulated Fibonacci cp strictly inside."""
    if not (p >= q >= 1):
        raise ValueError("need p >= q >= 1")
    low = 22 * q - 30
    high = 22 * q + 6 * ceil((2 * p) ** 0.5)
    return low, high


def tiled_translation(i, k, coarse: CoarseTable):
    """Completion time of every TTMQR update of the elimination of tile
    (i,k): 10k + 6*coarse(i,k).  Valid for all but the last column."""
    if k >= coarse.q:
        raise ValueError("translation excludes the last column (need k <= q-1)")
    if not (i > k >= 1):
        raise ValueError("need a sub-diagonal tile")
    return 10 * k + 6 * coarse(i, k)


# ---------------------------------------------------------------------------
# column calculus (weighted iterates)

@dataclass
class ColumnIter:
    """A column of nondecreasing ready times with the task weight used to
    iterate it."""

    values: list
    w: int = 1

    def __post_init__(self):
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("column values must be nondecreasing")
        if self.w <= 0:
            raise ValueError("task weight must be positive")

    def runs(self):
        out = []
        for v in self.values:
            if out and out[-1][0] == v:
                out[-1][1] += 1
            else:
                out.append([v, 1])
        return [(v, n) for v, n in out]


def optiter(a: ColumnIter) -> ColumnIter:
    """Smallest bottom-to-top iterate of a column: the Asap process on one
    column, eliminations proceeding strictly from the bottom up."""
    if not a.values:
        raise ValueError("empty column")
    w = a.w
    ready = list(a.values)       # position 0 is the bottom row
    alive = list(range(len(ready)))
    avail = {pos: t for pos, t in zip(alive, ready)}
    done = []
    while len(alive) > 1:
        times = sorted({avail[pos] for pos in alive})
        fired = False
        for now in times:
            block = []
            for pos in alive:
                if avail[pos] <= now:
                    block.append(pos)
                else:
                    break
            s = len(block) // 2
            if s == 0:
                continue
            targets = block[:s]
            pivots = block[s:2 * s]
            for tpos in targets:
                alive.remove(tpos)
                done.append(now + w)
            for ppos in pivots:
                avail[ppos] = now + w
            fired = True
            break
        if not fired:
            raise AssertionError("column iteration stalled")
    return ColumnIter(sorted(done), w)


def column_asap_free(a: ColumnIter) -> ColumnIter:
    """Asap on one column without the bottom-to-top restriction: pair any
    available rows as soon as possible."""
    w = a.w
    avail = sorted(a.values)
    done = []
    while len(avail) > 1:
        now = avail[1] if avail[1] > avail[0] else avail[0]
        ready = [t for t in avail if t <= now]
        s = len(ready) // 2
        for _ in range(s):
            avail.pop(0)
            done.append(now + w)
        for n in range(s):
            avail[n] = now + w
        avail.sort()
    return ColumnIter(sorted(done), w)


def is_iterate(a: ColumnIter, c: ColumnIter) -> bool:
    """Validity conditions of a weighted iterate c of column a."""
    if c.w != a.w:
        return False
    n = len(a.values)
    if len(c.values) != n - 1:
        return False
    if any(y < x for x, y in zip(c.values, c.values[1:])):
        return False
    w = a.w
    aruns = a.runs()
    cruns = c.runs()
    qn = len(aruns)
    pn = len(cruns)
    if cruns and cruns[0][0] < aruns[0][0] + w:
        return False
    consumed = 0
    for h, (ch, mh) in enumerate(cruns):
        window = None
        for k in range(1, qn + 1):
            lo = aruns[k - 1][0] + w if k >= 1 else None
            hi = aruns[k][0] if k < qn else None
            if lo <= ch and (hi is None or ch <= hi):
                window = k
                break
        if window is not None:
            arrived = sum(nk for _, nk in aruns[:window])
        else:
            j = min(pn + 1, qn)
            if aruns[j - 1][0] > ch:
                return False
            arrived = sum(nk for _, nk in aruns[:j])
        if mh > (arrived - consumed) // 2:
            return False
        consumed += mh
    return True
