"""
Simulating a marked-vertex search
=================================

Run the arc-space walk on the triangle and on the Petersen graph and watch
the running average of the search probability settle.
"""

import numpy as np

from dtqw.graphs import build_family
from dtqw.walk import search_probability_at, simulate, walk_operators

# the triangle: three vertices, six arcs, vertex 0 marked
ops = walk_operators(build_family("complete", 3), 0)
print("first steps on K3:", [round(search_probability_at(ops, t), 4) for t in range(6)])

# one trajectory gives the search probability at every step
_, probs, _ = simulate(ops, 100_000)
running = np.cumsum(probs) / np.arange(1, len(probs) + 1)
for T in (10, 100, 1_000, 10_000, 100_000):
    print(f"K3       T={T:>7}  running average {running[T - 1]:.6f}")

# the same on the Petersen graph
ops = walk_operators(build_family("petersen"), 0)
_, probs, _ = simulate(ops, 200_000)
running = np.cumsum(probs) / np.arange(1, len(probs) + 1)
for T in (10, 1_000, 200_000):
    print(f"Petersen T={T:>7}  running average {running[T - 1]:.6f}")
