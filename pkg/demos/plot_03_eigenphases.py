"""
Eigenphases and the clone matrix
================================

The interior eigenvalues of the clone (augmented) matrix give the walk's
eigenphases through lambda = k cos(theta). The reflection walk -U has
these phases. The oracle sign flips the phases of U itself by pi.
"""

import numpy as np

from dtqw.graphs import build_family
from dtqw.spectral import build_augmented, herm_eig, reconstruct_F, unitary_eig, walk_eigenphases
from dtqw.walk import walk_matrix, walk_operators

g = build_family("petersen")
for ph in walk_eigenphases(g, 0):
    tag = "boundary" if ph.boundary else f"theta={ph.theta:.6f}"
    print(f"lambda={ph.value:+.6f} mult={ph.multiplicity} {tag}")

# compare with the phases of the dense 30 x 30 walk
W = -walk_matrix(walk_operators(g, 0))
phases = sorted(round(theta, 6) for theta, _, _ in unitary_eig(W))
print("phases of -U:", phases)

# rebuild one eigenprojection from the clone spectrum and test it
dec = herm_eig(build_augmented(g, 0).matrix)
e = next(p for p in dec if abs(p.value) < g.k - 1e-9)
F = reconstruct_F(g, 0, e.value, e.projection)
theta = np.arccos(e.value / g.k)
print("||W F - e^{i theta} F|| =", np.abs(W @ F - np.exp(1j * theta) * F).max())
print("trace F =", np.trace(F).real, "multiplicity =", e.multiplicity)
