"""Frozen reference values used by the CLI --check mode.

Tables are stored row-wise for the 15x6 instance (rows 2..15, each row
listing columns 1..min(row-1, 6)), plus the p=40 critical-path columns and
the t=5 bound table.
"""

COARSE_15x6 = {
    "sameh-kuck": [[1], [2, 3], [3, 4, 5], [4, 5, 6, 7], [5, 6, 7, 8, 9],
                   [6, 7, 8, 9, 10, 11], [7, 8, 9, 10, 11, 12],
                   [8, 9, 10, 11, 12, 13], [9, 10, 11, 12, 13, 14],
                   [10, 11, 12, 13, 14, 15], [11, 12, 13, 14, 15, 16],
                   [12, 13, 14, 15, 16, 17], [13, 14, 15, 16, 17, 18],
                   [14, 15, 16, 17, 18, 19]],
    "fibonacci": [[5], [4, 7], [4, 6, 9], [3, 6, 8, 11], [3, 5, 8, 10, 13],
                  [3, 5, 7, 10, 12, 15], [2, 5, 7, 9, 12, 14],
                  [2, 4, 7, 9, 11, 14], [2, 4, 6, 9, 11, 13],
                  [2, 4, 6, 8, 11, 13], [1, 4, 6, 8, 10, 13],
                  [1, 3, 6, 8, 10, 12], [1, 3, 5, 8, 10, 12],
                  [1, 3, 5, 7, 10, 12]],
    "greedy": [[4], [3, 6], [3, 5, 8], [2, 5, 7, 10], [2, 4, 7, 9, 12],
               [2, 4, 6, 9, 11, 14], [2, 4, 6, 8, 10, 13],
               [1, 3, 5, 8, 10, 12], [1, 3, 5, 7, 9, 11],
               [1, 3, 5, 7, 9, 11], [1, 3, 4, 6, 8, 10],
               [1, 2, 4, 6, 8, 10], [1, 2, 4, 5, 7, 9], [1, 2, 3, 5, 6, 8]],
}

TILED_15x6 = {
    "flattree": [[6], [8, 28], [10, 34, 50], [12, 40, 56, 72],
                 [14, 46, 62, 78, 94], [16, 52, 68, 84, 100, 116],
                 [18, 58, 74, 90, 106, 122], [20, 64, 80, 96, 112, 128],
                 [22, 70, 86, 102, 118, 134], [24, 76, 92, 108, 124, 140],
                 [26, 82, 98, 114, 130, 146], [28, 88, 104, 120, 136, 152],
                 [30, 94, 110, 126, 142, 158], [32, 100, 116, 132, 148, 164]],
    "fibonacci": [[14], [12, 48], [12, 46, 70], [10, 42, 68, 92],
                  [10, 40, 64, 90, 114], [10, 40, 62, 86, 112, 136],
                  [8, 36, 62, 84, 108, 134], [8, 34, 58, 84, 106, 130],
                  [8, 34, 56, 80, 106, 128], [8, 34, 56, 78, 102, 128],
                  [6, 28, 56, 78, 100, 122], [6, 28, 50, 78, 100, 122],
                  [6, 28, 44, 72, 100, 122], [6, 22, 44, 60, 94, 116]],
    "greedy": [[12], [10, 42], [10, 40, 64], [8, 36, 62, 86],
               [8, 34, 56, 84, 106], [8, 34, 56, 78, 102, 128],
               [8, 30, 52, 78, 100, 122], [6, 28, 50, 72, 100, 118],
               [6, 28, 50, 72, 94, 116], [6, 28, 50, 68, 94, 116],
               [6, 28, 44, 66, 88, 110], [6, 22, 44, 66, 88, 110],
               [6, 22, 44, 60, 82, 104], [6, 22, 38, 60, 76, 98]],
    "binarytree": [[6], [8, 28], [6, 36, 56], [10, 34, 70, 90],
                   [6, 44, 68, 104, 124], [8, 28, 78, 102, 138, 158],
                   [6, 42, 62, 112, 136, 172], [12, 40, 76, 96, 146, 170],
                   [6, 46, 74, 110, 130, 180], [8, 28, 80, 108, 144, 164],
                   [6, 36, 56, 114, 142, 178], [10, 34, 64, 84, 148, 176],
                   [6, 38, 62, 92, 112, 182], [8, 28, 66, 90, 114, 134]],
    ("plasmatree", 5): [[6], [8, 28], [10, 34, 50], [12, 40, 56, 72],
                        [14, 46, 62, 78, 94], [6, 54, 74, 90, 106, 122],
                        [8, 28, 82, 102, 118, 134], [10, 34, 50, 110, 130, 146],
                        [12, 40, 56, 72, 138, 158], [16, 52, 68, 84, 100, 166],
                        [6, 56, 80, 96, 112, 128], [8, 28, 84, 108, 124, 140],
                        [10, 34, 50, 112, 136, 152], [12, 40, 56, 72, 140, 164]],
}

GREEDY_CP_P40 = [16, 54, 74, 104, 126, 148, 170, 192, 214, 236, 258, 280,
                 302, 324, 346, 368, 390, 412, 432, 454, 476, 498, 520, 542,
                 564, 586, 608, 630, 652, 668, 684, 700, 716, 732, 748, 764,
                 780, 796, 812, 826]
FIBONACCI_CP_P40 = [22, 72, 94, 116, 138, 160, 182, 204, 226, 248, 270, 292,
                    314, 336, 358, 380, 402, 424, 446, 468, 490, 512, 534,
                    556, 578, 600, 622, 644, 666, 688, 710, 732, 754, 776,
                    798, 820, 842, 862, 878, 892]
PLASMATREE_CP_P40 = [(1, 16), (3, 60), (5, 98), (5, 132), (5, 166), (10, 198),
                     (10, 226), (10, 254), (10, 282), (10, 310), (20, 336),
                     (20, 358), (20, 380), (20, 402), (20, 424), (20, 446),
                     (20, 468), (20, 490), (20, 512), (20, 534), (20, 554),
                     (20, 570), (20, 586), (20, 602), (20, 618), (20, 634),
                     (20, 650), (20, 666), (20, 682), (20, 698), (20, 714),
                     (20, 730), (20, 746), (20, 762), (20, 778), (20, 794),
                     (20, 810), (20, 826), (20, 842), (20, 856)]

# t=5 Cholesky bound table: p -> (lost area, T_p, speedup, efficiency);
# the lost-area reference stops at p=5
CHOL_BOUNDS_T5 = {
    1: (0, "125.00", "1.00", "1.00"), 2: (4, "64.50", "1.94", "0.97"),
    3: (11, "45.33", "2.76", "0.92"), 4: (24, "37.25", "3.36", "0.84"),
    5: (45, "35.00", "3.57", "0.71"), 6: (None, "35.00", "3.57", "0.60"),
    7: (None, "35.00", "3.57", "0.51"), 8: (None, "35.00", "3.57", "0.45"),
    9: (None, "35.00", "3.57", "0.40"), 10: (None, "35.00", "3.57", "0.36"),
}


def tiled_table_cells(key):
    """(row, col) -> value for a stored zeroed-time table."""
    rows = TILED_15x6[key]
    return {(r, k): v for r, row in enumerate(rows, start=2)
            for k, v in enumerate(row, start=1)}


def coarse_table_cells(algo):
    rows = COARSE_15x6[algo]
    return {(r, k): v for r, row in enumerate(rows, start=2)
            for k, v in enumerate(row, start=1)}
