"""
The average from the vertex-deleted spectrum
============================================

The long-run average search probability can be read off the spectrum of
the graph with the marked vertex removed. Each eigenvalue contributes to
two sums, s1 and s2.
"""

from dtqw.graphs import build_family
from dtqw.spectral import closed_form_average
from dtqw.walk import empirical_average_search_probability, walk_operators

for spec in [("complete", 3), ("cycle", 6), ("petersen",), ("johnson", 5, 2)]:
    g = build_family(*spec)
    rep = closed_form_average(g, 0)
    print(f"\n{g.name}: n={rep.n} k={rep.k}")
    for row in rep.rows:
        print(f"  lambda={row.value:+.4f} mult={row.multiplicity} "
              f"e_v E 1={row.evE1:.4f} s1 term={row.s1_term:.5f}")
    emp = empirical_average_search_probability(walk_operators(g, 0), 200_000)
    print(f"  s1={rep.s1:.6f} s2={rep.s2:.6f} total={rep.total:.6f} simulated={emp:.6f}")

# for complete graphs the total has a rational closed form
for n in (4, 10, 100):
    rep = closed_form_average(build_family("complete", n), 0)
    exact = ((n - 1) ** 3 + (n - 2) ** 2) / (n * (2 * n - 3) ** 2)
    print(f"K{n}: {rep.total:.12f} vs {exact:.12f}")
