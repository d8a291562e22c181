#!/usr/bin/env python3
"""Emit the integer program for a small tiled QR instance, map a simulator
schedule onto its variables, and check feasibility constraint by
constraint (then break the schedule and watch the right groups fire)."""

from tiledag import (
    WeightModel, build_from_trace, build_tree, check_feasible,
    complete_assignment, emit_ip, list_schedule, schedule_to_assignment,
)

p, q, procs = 4, 3, 3
w = WeightModel.qr_tt()
build = build_tree(p, q, "grasap")
graph = build_from_trace(build.trace)
schedule = list_schedule(graph, w, procs, "max")
print(f"grasap {p}x{q} on {procs} processors: makespan {schedule.makespan}")

horizon = schedule.makespan // 2 + 4
model = emit_ip(p, q, horizon, capacity=procs)
print(f"model: horizon {horizon} (half-weight units), "
      f"{len(model.int_vars)} integer vars, {len(model.bin_vars)} binaries, "
      f"{len(model.constraints)} constraints")

text = model.render()
print("first lines of the LP file:")
for line in text.splitlines()[:6]:
    print(" ", line)

assign = complete_assignment(model, schedule_to_assignment(graph, schedule))
ok, violated = check_feasible(model, assign)
print(f"\nsimulator schedule feasible: {ok}")

broken = schedule_to_assignment(graph, schedule)
victim = next(k for k in sorted(broken) if k.startswith("z_"))
print(f"moving {victim} to finish at time 1 ...")
broken[victim] = 1
broken = complete_assignment(model, broken)
ok, violated = check_feasible(model, broken)
groups = sorted({v.group for v in violated})
print(f"feasible: {ok}; violated constraint groups: {groups}")
