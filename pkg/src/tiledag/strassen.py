"""Tiled matrix multiplication and recursive Strassen-Winograd traces.

The recursive algorithm splits the tile grid in half, forms 8 temporary
sums, 7 recursive products into fresh temporaries and 7 more sums into the
result quadrants; below the recursion cutoff the product is the plain
triple-loop tiled multiply with ascending-k accumulation.  Analytic
counters give the task count, flop count, task-minimizing recursion depth
and temporary-tile usage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .taskgraph import GEADD, GEMM, Task, TileRef, WeightModel


@dataclass(frozen=True)
class StrassenParams:
    """p: tiles per side (a power of two); r: recursion levels;
    n_b: tile order, giving m = 2 n_b^3 - n_b^2 flops per tile multiply
    and a = n_b^2 per tile add."""

    p: int
    r: int
    n_b: int = 200

    def __post_init__(self):
        if self.p < 1 or (self.p & (self.p - 1)):
            raise ValueError("p must be a power of two")
        if not (0 <= self.r <= int(math.log2(self.p))):
            raise ValueError("need 0 <= r <= log2(p)")
        if self.n_b < 1:
            raise ValueError("n_b must be positive")

    @property
    def m(self):
        return 2 * self.n_b ** 3 - self.n_b ** 2

    @property
    def a(self):
        return self.n_b ** 2


class _View:
    """A square window of a named tile array."""

    __slots__ = ("name", "r0", "c0", "n")

    def __init__(self, name, r0, c0, n):
        self.name = name
        self.r0 = r0
        self.c0 = c0
        self.n = n

    def tile(self, i, j):
        return TileRef(self.name, self.r0 + i, self.c0 + j)

    def quad(self, qi, qj):
        h = self.n // 2
        return _View(self.name, self.r0 + qi * h, self.c0 + qj * h, h)


class _Emitter:
    def __init__(self):
        self.trace = []
        self.temp_tiles = 0
        self._uid = 0

    def fresh(self, label, n):
        self._uid += 1
        self.temp_tiles += n * n
        return _View(f"{label}#{self._uid}", 0, 0, n)

    def emit(self, kind, indices, reads, writes):
        self.trace.append(Task(len(self.trace), kind, indices, reads, writes))


def _tiled_gemm(em, A, B, C):
    n = A.n
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # ascending-k accumulation, serialized per output tile
                em.emit(GEMM, (C.r0 + i, C.c0 + j, k),
                        [A.tile(i, k), B.tile(k, j), C.tile(i, j)],
                        [C.tile(i, j)])


def _tiled_geadd(em, A, B, C):
    n = A.n
    for i in range(n):
        for j in range(n):
            em.emit(GEADD, (C.r0 + i, C.c0 + j),
                    [A.tile(i, j), B.tile(i, j)], [C.tile(i, j)])


def _gesw(em, A, B, C, r):
    if r == 0:
        _tiled_gemm(em, A, B, C)
        return
    h = A.n // 2
    a11, a12, a21, a22 = A.quad(0, 0), A.quad(0, 1), A.quad(1, 0), A.quad(1, 1)
    b11, b12, b21, b22 = B.quad(0, 0), B.quad(0, 1), B.quad(1, 0), B.quad(1, 1)
    c11, c12, c21, c22 = C.quad(0, 0), C.quad(0, 1), C.quad(1, 0), C.quad(1, 1)
    t = [em.fresh(f"T{n}", h) for n in range(1, 9)]
    q = [em.fresh(f"Q{n}", h) for n in range(1, 8)]
    u1, u2, u3 = (em.fresh(f"U{n}", h) for n in range(1, 4))
    t1, t2, t3, t4, t5, t6, t7, t8 = t
    q1, q2, q3, q4, q5, q6, q7 = q
    # phase 1
    _tiled_geadd(em, a21, a22, t1)
    _tiled_geadd(em, t1, a11, t2)
    _tiled_geadd(em, a11, a21, t3)
    _tiled_geadd(em, a12, t2, t4)
    _tiled_geadd(em, b12, b11, t5)
    _tiled_geadd(em, b22, t5, t6)
    _tiled_geadd(em, b22, b12, t7)
    _tiled_geadd(em, t6, b21, t8)
    # phase 2: seven recursive products
    _gesw(em, t2, t6, q1, r - 1)
    _gesw(em, a11, b11, q2, r - 1)
    _gesw(em, a12, b21, q3, r - 1)
    _gesw(em, t3, t7, q4, r - 1)
    _gesw(em, t1, t5, q5, r - 1)
    _gesw(em, t4, b22, q6, r - 1)
    _gesw(em, a22, t8, q7, r - 1)
    # phase 3
    _tiled_geadd(em, q1, q2, u1)
    _tiled_geadd(em, u1, q4, u2)
    _tiled_geadd(em, q5, q6, u3)
    _tiled_geadd(em, q2, q3, c11)
    _tiled_geadd(em, u1, u3, c12)
    _tiled_geadd(em, u2, q7, c21)
    _tiled_geadd(em, u2, q5, c22)


def gen_tiled_gemm(n: int) -> list:
    """Triple-loop tiled product: n^3 GEMM tasks, ascending-k chains."""
    if n < 1:
        raise ValueError("n must be >= 1")
    em = _Emitter()
    _tiled_gemm(em, _View("A", 0, 0, n), _View("B", 0, 0, n), _View("C", 0, 0, n))
    return em.trace


def gen_strassen(params: StrassenParams):
    """Recursive Strassen-Winograd trace; returns (trace, temp_tiles)."""
    em = _Emitter()
    _gesw(em, _View("A", 0, 0, params.p), _View("B", 0, 0, params.p),
          _View("C", 0, 0, params.p), params.r)
    return em.trace, em.temp_tiles


def strassen_task_count(p, r):
    total = 7 ** r * (p // 2 ** r) ** 3
    for i in range(r):
        total += 15 * 7 ** (r - i - 1) * (p // 2 ** (r - i)) ** 2
    return total


def strassen_flops(params: StrassenParams):
    p, r = params.p, params.r
    f = params.m * 7 ** r * (p // 2 ** r) ** 3
    for i in range(r):
        f += 15 * params.a * 7 ** (r - i - 1) * (p // 2 ** (r - i)) ** 2
    return f


def gemm_flops(p, n_b=200):
    m = 2 * n_b ** 3 - n_b ** 2
    return m * p ** 3


def r_min(p):
    """Recursion level minimizing the task count (at least one level, as
    zero recursion is the plain tiled product)."""
    if p < 2 or (p & (p - 1)):
        raise ValueError("p must be a power of two >= 2")
    x = p * math.log(8 / 7) / (5 * math.log(7 / 4))
    return max(1, math.ceil(math.log2(x)))


def temp_tile_count(p, r):
    """18 temporaries of (p/2)^2 tiles per recursion level, recursively."""
    if r == 0:
        return 0
    h = p // 2
    return 18 * h * h + 7 * temp_tile_count(h, r - 1)


def strassen_counts(params: StrassenParams):
    """(tasks, flops, r_min, temp_tiles) for the parameter set."""
    return (strassen_task_count(params.p, params.r),
            strassen_flops(params),
            r_min(params.p) if params.p >= 2 else 0,
            temp_tile_count(params.p, params.r))


def strassen_weight_model(n_b=200) -> WeightModel:
    """Durations proportional to flops, normalized so the cheapest task
    (the tile add) weighs 1: GEMM = 2 n_b - 1, GEADD = 1."""
    return WeightModel.custom({GEMM: 2 * n_b - 1, GEADD: 1})


def counters_csv(rows):
    lines = ["p,r,tasks,flops,cp,temp_tiles"]
    for row in rows:
        lines.append(",".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
