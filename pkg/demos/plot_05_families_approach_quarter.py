"""
Families drifting toward one quarter
====================================

Sweep complete graphs, Paley graphs and two-dimensional Hamming graphs and
tabulate how far the average search probability is from 1/4.
"""

from dtqw.drg import family_sweep

sweeps = [
    ("complete", [4, 8, 16, 32, 64, 128, 256]),
    ("paley", [5, 13, 17, 29, 37, 41]),
    ("hamming", [(2, q) for q in range(3, 8)]),
]
for family, params in sweeps:
    res = family_sweep(family, params)
    print(f"\n{family}")
    for row in res.rows:
        print(f"  {str(row.param):<8} n={row.n:<4} k={row.k:<4} total={row.total:.6f} "
              f"|total-1/4|={row.deviation:.6f} criterion={row.criterion:.4f}")
    print(f"  strictly decreasing: {res.monotone}; last below first: {res.overall_decreasing}")
