"""Task DAGs, critical paths, scheduling bounds and IP emission for tiled
dense linear algebra (Cholesky factorization/inversion, QR elimination
trees, Strassen-Winograd multiplication)."""

from .taskgraph import (
    ALL_KINDS, BARRIER, COPY, GEADD, GEMM, GEQRT, LAUUM, POTRF, SYRK, TRMM,
    TRSM, TRTRI, TSMQR, TSQRT, TTMQR, TTQRT, UNMQR,
    AlapProfile, CpAnnotation, Task, TaskGraph, TileRef, TraceTimer,
    WeightModel, alap_profile, annotate_cp, asap_times, build_from_trace,
    t_seq, trace_cp,
)
from .cholesky import (
    CholInvConfig, chol_cp_oracle, gen_chol_fact, gen_chol_inversion,
    inversion_steps,
)
from .qr import (
    ColumnIter, CoarseTable, ElimEntry, EliminationList, QrBuild,
    asap_build, asap_graph, binary_tree_list, build_tree, coarse_cp_oracle,
    coarse_schedule, column_asap_free, eager_coarse, elim_weight,
    fibonacci_cp_bounds, fibonacci_x, flat_tree_list, flattree_cp_composed,
    flattree_cp_oracle, grasap_build, grasap_graph, is_iterate, optiter,
    plasmatree_list, tiled_build, tiled_graph, tiled_translation,
    total_weight, verify_weight, zeroed_table_csv,
)
from .sched import (
    BoundsRow, Schedule, alap_bound, alpha_min, bounds_table, check_schedule,
    gamma_ub, list_schedule, lost_area, lower_bound_factor, rooftop_bound,
    sync_chol_graph, sync_chol_schedule,
)
from .strassen import (
    StrassenParams, gemm_flops, gen_strassen, gen_tiled_gemm, r_min,
    strassen_counts, strassen_flops, strassen_task_count,
    strassen_weight_model, temp_tile_count,
)
from .ipmodel import (
    IPModel, check_feasible, complete_assignment, emit_ip, parse_assignment,
    schedule_to_assignment,
)
