"""Command-line front end: reproduce the reference tables and sweeps as CSV.

Every subcommand writes deterministic CSV (stdout by default, --out FILE
otherwise; TILEDAG_OUTDIR overrides the output directory).  --check
re-derives golden values where they exist and exits 2 on flag errors,
1 on check mismatches.
"""

from __future__ import annotations

import argparse
import os
import sys
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from . import cholesky, golden, ipmodel, qr, sched, strassen
from .taskgraph import WeightModel, annotate_cp, build_from_trace, trace_cp


def _fmt2(x) -> str:
    f = Fraction(x)
    return str((Decimal(f.numerator) / Decimal(f.denominator))
               .quantize(Decimal("0.01"), ROUND_HALF_UP))


def _write(args, text, suffix=""):
    out = getattr(args, "out", None)
    if out:
        outdir = os.environ.get("TILEDAG_OUTDIR", "")
        path = os.path.join(outdir, out + suffix) if outdir else out + suffix
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _parse_procs(spec):
    if ".." in spec:
        lo, hi = spec.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",")]


def _fail_cells(cells):
    for c in cells:
        print(f"check mismatch: {c}", file=sys.stderr)
    return 1 if cells else 0


def cmd_chol_cp(args):
    t = args.t
    wu = WeightModel.unit()
    rows = ["step,in_place,out_of_place"]
    per = {}
    for oop in (False, True):
        cfg = cholesky.CholInvConfig(t, out_of_place=oop)
        per[oop] = [trace_cp(s, wu) for s in cholesky.inversion_steps(cfg)]
    for n in range(3):
        rows.append(f"step{n+1},{per[False][n]},{per[True][n]}")
    pi = trace_cp(cholesky.gen_chol_inversion(cholesky.CholInvConfig(t)), wu)
    po = trace_cp(cholesky.gen_chol_inversion(
        cholesky.CholInvConfig(t, out_of_place=True)), wu)
    rows.append(f"pipelined,{pi},{po}")
    rows.append(f"unpipelined,{sum(per[False])},{sum(per[True])}")
    _write(args, "\n".join(rows) + "\n")
    if args.check:
        o = cholesky.chol_cp_oracle
        cells = []
        for name, got, want in (
                ("step1-in", per[False][0], o(t, "step1")),
                ("step2-in", per[False][1], o(t, "step2-in")),
                ("step3-in", per[False][2], o(t, "step3-in")),
                ("step2-out", per[True][1], o(t, "step2-out")),
                ("step3-out", per[True][2], o(t, "step3-out")),
                ("pipe-in", pi, o(t, "pipe-in")),
                ("pipe-out", po, o(t, "pipe-out"))):
            if got != want:
                cells.append(f"{name}: {got} != {want}")
        return _fail_cells(cells)
    return 0


def cmd_chol_bounds(args):
    trace = cholesky.gen_chol_fact(args.t, "right")
    graph = build_from_trace(trace)
    wc = WeightModel.cholesky()
    procs = _parse_procs(args.procs)
    rows = sched.bounds_table(graph, wc, procs)
    lines = ["p,LA,T_alap,T_rooftop,speedup,efficiency"]
    for r in rows:
        lines.append(f"{r.p},{r.lost_area},{_fmt2(r.t_alap)},{_fmt2(r.t_roof)},"
                     f"{_fmt2(r.speedup)},{_fmt2(r.efficiency)}")
    _write(args, "\n".join(lines) + "\n")
    if args.check and args.t == 5:
        cells = []
        for r in rows:
            ref = golden.CHOL_BOUNDS_T5.get(r.p)
            if ref is None:
                continue
            la, t_p, s_p, e_p = ref
            if la is not None and r.lost_area != la:
                cells.append(f"LA({r.p}): {r.lost_area} != {la}")
            got = (_fmt2(r.t_alap), _fmt2(r.speedup), _fmt2(r.efficiency))
            if got != (t_p, s_p, e_p):
                cells.append(f"row {r.p}: {got} != {(t_p, s_p, e_p)}")
        return _fail_cells(cells)
    return 0


def cmd_qr_coarse(args):
    table, elim = qr.coarse_schedule(args.p, args.q, args.algo)
    _write(args, table.to_csv())
    if args.list:
        _write(args, elim.to_csv(), suffix=".elim")
    if args.check:
        cells = []
        cp = table.cp()
        want = qr.coarse_cp_oracle(args.p, args.q, args.algo)
        if cp != want:
            cells.append(f"coarse cp: {cp} != {want}")
        if (args.p, args.q) == (15, 6):
            for (i, k), v in golden.coarse_table_cells(args.algo).items():
                if table(i, k) != v:
                    cells.append(f"({i},{k}): {table(i, k)} != {v}")
        return _fail_cells(cells)
    return 0


def cmd_qr_tiled(args):
    build = qr.build_tree(args.p, args.q, args.algo, family=args.family,
                          bs=args.bs, grasap_i=args.i)
    _write(args, qr.zeroed_table_csv(build))
    if args.check:
        cells = []
        if not qr.verify_weight(build):
            cells.append("total weight mismatch")
        if args.algo == "flattree" and args.family == "TT":
            want = qr.flattree_cp_oracle(args.p, args.q)
            if build.cp != want:
                cells.append(f"cp {build.cp} != closed form {want}")
        key = (args.algo, args.bs) if args.algo == "plasmatree" else args.algo
        if (args.p, args.q) == (15, 6) and args.family == "TT" \
                and key in golden.TILED_15x6:
            for (i, k), v in golden.tiled_table_cells(key).items():
                if build.zeroed.get((i, k)) != v:
                    cells.append(f"({i},{k}): {build.zeroed.get((i, k))} != {v}")
        return _fail_cells(cells)
    return 0


def cmd_qr_cp_table(args):
    lines = ["q,greedy,fibonacci,plasmatree_best,best_bs,flattree"]
    rows = []
    for q in range(1, args.q + 1):
        g = qr.build_tree(args.p, q, "greedy", keep_trace=False).cp
        f = qr.build_tree(args.p, q, "fibonacci", keep_trace=False).cp
        best_bs, best = 1, None
        for bs in range(1, args.p + 1):
            cp = qr.build_tree(args.p, q, "plasmatree", bs=bs, keep_trace=False).cp
            if best is None or cp < best:
                best, best_bs = cp, bs
        ft = qr.flattree_cp_oracle(args.p, q)
        rows.append((q, g, f, best, best_bs, ft))
        lines.append(f"{q},{g},{f},{best},{best_bs},{ft}")
    _write(args, "\n".join(lines) + "\n")
    if args.check and args.p == 40:
        cells = []
        for (q, g, f, best, _, _) in rows:
            if g != golden.GREEDY_CP_P40[q - 1]:
                cells.append(f"greedy q={q}: {g} != {golden.GREEDY_CP_P40[q - 1]}")
            if f != golden.FIBONACCI_CP_P40[q - 1]:
                cells.append(f"fibonacci q={q}: {f} != {golden.FIBONACCI_CP_P40[q - 1]}")
            if best != golden.PLASMATREE_CP_P40[q - 1][1]:
                cells.append(f"plasmatree q={q}: {best} != {golden.PLASMATREE_CP_P40[q - 1][1]}")
        return _fail_cells(cells)
    return 0


def cmd_qr_bounds(args):
    build = qr.build_tree(args.p, args.q, args.algo, bs=args.bs)
    graph = build_from_trace(build.trace)
    w = WeightModel.qr_tt()
    rows = sched.bounds_table(graph, w, _parse_procs(args.procs))
    lines = ["p,LA,T_alap,T_rooftop,speedup,efficiency"]
    for r in rows:
        lines.append(f"{r.p},{r.lost_area},{_fmt2(r.t_alap)},{_fmt2(r.t_roof)},"
                     f"{_fmt2(r.speedup)},{_fmt2(r.efficiency)}")
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_sched(args):
    if args.algo == "cholesky":
        trace = cholesky.gen_chol_fact(args.t, "right")
        weights = WeightModel.cholesky()
    else:
        build = qr.build_tree(args.p, args.q, args.algo, bs=args.bs)
        trace = build.trace
        weights = WeightModel.qr_tt()
    graph = build_from_trace(trace)
    results = []
    for p in _parse_procs(args.procs):
        s = sched.list_schedule(graph, weights, p, args.policy, seed=args.seed)
        sched.check_schedule(graph, weights, s)
        results.append((p, s))
    lines = ["procs,makespan"] + [f"{p},{s.makespan}" for p, s in results]
    _write(args, "\n".join(lines) + "\n")
    if args.gantt:
        _write(args, results[-1][1].to_csv(graph, weights), suffix=".gantt")
    if args.check and args.algo == "cholesky":
        ann = annotate_cp(graph, weights)
        cells = []
        if ann.cp_length != 9 * args.t - 10:
            cells.append(f"cp {ann.cp_length} != {9 * args.t - 10}")
        return _fail_cells(cells)
    return 0


def cmd_alpha(args):
    lines = ["t,p_opt,alpha"]
    for t in range(3, args.t + 1):
        p_opt, alpha = sched.alpha_min(t)
        lines.append(f"{t},{p_opt},{float(alpha):.4f}")
    _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_strassen_count(args):
    wu = WeightModel.unit()
    rows = []
    for r in range(0, args.r + 1):
        params = strassen.StrassenParams(args.p, r, args.nb)
        trace, temps = strassen.gen_strassen(params)
        cp = trace_cp(trace, wu)
        rows.append((args.p, r, len(trace), strassen.strassen_flops(params), cp, temps))
    _write(args, strassen.counters_csv(rows))
    if args.check:
        cells = []
        for (_, r, tasks, flops, _, temps) in rows:
            want = strassen.strassen_task_count(args.p, r)
            if tasks != want:
                cells.append(f"r={r}: tasks {tasks} != {want}")
            if temps != strassen.temp_tile_count(args.p, r):
                cells.append(f"r={r}: temp tiles {temps}")
        return _fail_cells(cells)
    return 0


def cmd_ip_emit(args):
    horizon = args.T
    if horizon is None:
        horizon = 3 * args.p * args.q * args.q - args.q ** 3  # serial bound, half units
    model = ipmodel.emit_ip(args.p, args.q, horizon, capacity=args.procs)
    _write(args, model.render(), suffix=".lp" if args.out and not args.out.endswith(".lp") else "")
    return 0


def cmd_ip_check(args):
    horizon = args.T
    build = qr.build_tree(args.p, args.q, args.algo)
    graph = build_from_trace(build.trace)
    w = WeightModel.qr_tt()
    if args.assignment:
        with open(args.assignment) as fh:
            assign = ipmodel.parse_assignment(fh.read())
        if horizon is None:
            horizon = max(assign.values()) + 4
    else:
        s = sched.list_schedule(graph, w, args.procs or 1, "max")
        if horizon is None:
            horizon = s.makespan // 2 + 4   # big-M headroom past the last finish
        assign = ipmodel.schedule_to_assignment(graph, s)
    model = ipmodel.emit_ip(args.p, args.q, horizon, capacity=args.procs)
    assign = ipmodel.complete_assignment(model, assign)
    ok, violated = ipmodel.check_feasible(model, assign)
    print("feasible" if ok else "infeasible")
    for v in violated[:20]:
        print(f"  violated [{v.group}] {v.name}")
    return 0 if ok else 1


def main(argv=None):
    ap = argparse.ArgumentParser(prog="tiledag",
                                 description="task DAGs, critical paths, bounds "
                                             "and schedules of tiled linear algebra")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--check", action="store_true",
                       help="re-derive golden values; exit 1 on mismatch")
        return p

    p = add("chol-cp", cmd_chol_cp, help="per-step and pipelined inversion critical paths")
    p.add_argument("--t", type=int, required=True)

    p = add("chol-bounds", cmd_chol_bounds, help="Lost-Area/ALAP and Rooftop bound table")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--procs", default="1..10")

    p = add("qr-coarse", cmd_qr_coarse, help="coarse time-step table")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--algo", default="greedy",
                   choices=["sameh-kuck", "fibonacci", "greedy"])
    p.add_argument("--list", action="store_true", help="also write the elimination list CSV")

    p = add("qr-tiled", cmd_qr_tiled, help="tiled zeroed-time table")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--algo", default="greedy", choices=list(qr.TREE_ALGOS))
    p.add_argument("--family", default="TT", choices=["TT", "TS"])
    p.add_argument("--bs", type=int, help="plasmatree domain size")
    p.add_argument("--i", type=int, default=1, help="grasap trailing asap columns")

    p = add("qr-cp-table", cmd_qr_cp_table, help="critical-path comparison table")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True, help="largest column count")

    p = add("qr-bounds", cmd_qr_bounds, help="per-tree ALAP/Rooftop bounds")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--algo", default="grasap", choices=list(qr.TREE_ALGOS))
    p.add_argument("--bs", type=int)
    p.add_argument("--procs", default="1..14")

    p = add("sched", cmd_sched, help="bounded-processor list scheduling")
    p.add_argument("--algo", default="cholesky",
                   choices=["cholesky"] + list(qr.TREE_ALGOS))
    p.add_argument("--t", type=int, default=5, help="tiles per side (cholesky)")
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--q", type=int, default=5)
    p.add_argument("--bs", type=int)
    p.add_argument("--procs", default="1..8")
    p.add_argument("--policy", default="max", choices=["max", "min", "random"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gantt", action="store_true", help="write gantt CSV for the last row")

    p = add("alpha", cmd_alpha, help="smallest processor count attaining 9t-10")
    p.add_argument("--t", type=int, default=10, help="largest t")

    p = add("strassen-count", cmd_strassen_count, help="task/flop/cp/temp counters")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True, help="largest recursion level")
    p.add_argument("--nb", type=int, default=200)

    p = add("ip-emit", cmd_ip_emit, help="emit the integer program (LP format)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--T", type=int, help="horizon in half-weight units")
    p.add_argument("--procs", type=int, help="optional capacity extension")

    p = add("ip-check", cmd_ip_check, help="check an assignment against the model")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--T", type=int)
    p.add_argument("--algo", default="grasap", choices=list(qr.TREE_ALGOS))
    p.add_argument("--procs", type=int)
    p.add_argument("--assignment", help="file of 'name value' lines")

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
