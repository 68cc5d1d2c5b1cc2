"""
Bounds from the intersection array
==================================

For a distance-regular graph the quantities in the closed form are
controlled by the intersection array alone: the largest eigenvalue of the
vertex-deleted graph, the weight it puts on a neighbour of the marked
vertex, and the Laplacian-minor solution.
"""

from dtqw.drg import (
    bound_evE1,
    bound_lambda,
    dual_polys,
    laplacian_minor_solution,
    limit_criterion,
    s1_lower_bound,
)
from dtqw.graphs import build_family, intersection_array_of

for spec in [("petersen",), ("cycle", 6), ("hamming", 2, 4), ("johnson", 6, 2)]:
    g = build_family(*spec)
    arr = intersection_array_of(g)
    print(f"\n{g.name} {arr}  n={arr.n} k={arr.k} d={arr.d}")
    q = dual_polys(arr)
    print("  dual polynomials (ascending coefficients):", q.polys)
    for res in (bound_lambda(arr, g), bound_evE1(arr, g), s1_lower_bound(g)):
        print(f"  {res.name:<10} bound={res.bound:.6f} actual={res.actual:.6f} slack={res.slack:.6f}")
    print("  Laplacian-minor cell values:", [str(z) for z in laplacian_minor_solution(arr)])
    print("  criterion values:", limit_criterion(arr))
