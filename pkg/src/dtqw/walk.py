"""Arc-space quantum walk with a single marked vertex.

Arc ``(u, v)`` where ``v`` is the ``j``-th neighbour of ``u`` (ascending
order) lives at index ``u*k + j``. With that layout the coin is
block-diagonal and every operator below is an O(nk) array update.

The walk is ``U = R C O_a`` and is applied right to left: oracle, coin,
then arc reversal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GraphError, HypothesisError
from .graphs import Graph, is_connected

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


@dataclass(frozen=True, eq=False)
class ArcSpace:
    graph: Graph
    k: int
    heads: np.ndarray  # heads[u*k + j] = j-th neighbour of u
    rev: np.ndarray  # rev[idx(u->v)] = idx(v->u)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def size(self) -> int:
        return self.graph.n * self.k

    def index(self, u: int, v: int) -> int:
        j = self.graph.neighbors[u].index(v)
        return u * self.k + j

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.graph.neighbors[u]]


def arc_space(g: Graph) -> ArcSpace:
    k = g.k
    if k < 2:
        raise HypothesisError("valency", f"the walk needs k >= 2, got k = {k}")
    nbrs = g.neighbors
    heads = np.array([v for u in range(g.n) for v in nbrs[u]], dtype=np.int64)
    position = {}
    for u in range(g.n):
        for j, v in enumerate(nbrs[u]):
            position[u, v] = u * k + j
    rev = np.array([position[v, u] for u in range(g.n) for v in nbrs[u]], dtype=np.int64)
    heads.setflags(write=False)
    rev.setflags(write=False)
    return ArcSpace(g, k, heads, rev)


@dataclass(frozen=True, eq=False)
class WalkOperators:
    arcs: ArcSpace
    marked: int

    @property
    def graph(self) -> Graph:
        return self.arcs.graph

    @property
    def k(self) -> int:
        return self.arcs.k

    @property
    def n(self) -> int:
        return self.arcs.n

    def oracle_signs(self) -> np.ndarray:
        signs = -np.ones(self.n)
        signs[self.marked] = 1.0
        return signs


def walk_operators(g: Graph, a: int) -> WalkOperators:
    a = g.check_vertex(a)
    if not is_connected(g):
        raise HypothesisError("connected", "the walk needs a connected graph")
    return WalkOperators(arc_space(g), a)


def initial_state(arcs: ArcSpace) -> np.ndarray:
    return np.full(arcs.size, 1.0 / np.sqrt(arcs.size), dtype=complex)


def _check_len(ops: WalkOperators, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s)
    if s.shape != (ops.arcs.size,):
        raise ValueError(f"state must have shape ({ops.arcs.size},), got {s.shape}")
    return s


def apply_R(ops: WalkOperators, s: np.ndarray) -> np.ndarray:
    s = _check_len(ops, s)
    return s[ops.arcs.rev]


def apply_C(ops: WalkOperators, s: np.ndarray) -> np.ndarray:
    s = _check_len(ops, s)
    blocks = s.reshape(ops.n, ops.k)
    # (2/k J - I) x = 2 mean(x) - x per vertex block
    return (2.0 * blocks.mean(axis=1, keepdims=True) - blocks).ravel()


def apply_O(ops: WalkOperators, s: np.ndarray) -> np.ndarray:
    s = _check_len(ops, s)
    return (s.reshape(ops.n, ops.k) * ops.oracle_signs()[:, None]).ravel()


def apply_U(ops: WalkOperators, s: np.ndarray) -> np.ndarray:
    return apply_R(ops, apply_C(ops, apply_O(ops, s)))


def walk_matrix(ops: WalkOperators, limit: int = 60) -> np.ndarray:
    """Dense ``U = R C O_a`` built from the operator definitions.

    Only for small checks; refuses when ``nk > limit``.
    """
    nk = ops.arcs.size
    if nk > limit:
        raise GraphError(f"refusing to materialise U with nk = {nk} > {limit}")
    n, k = ops.n, ops.k
    R = np.zeros((nk, nk))
    R[ops.arcs.rev, np.arange(nk)] = 1.0
    C = np.kron(np.eye(n), 2.0 / k * np.ones((k, k)) - np.eye(k))
    E = np.zeros((n, n))
    E[ops.marked, ops.marked] = 1.0
    O = np.kron(2 * E - np.eye(n), np.eye(k))
    return R @ C @ O


# ----------------------------------------------------------------- simulation


def _trajectory_numpy(x, rev, signs, n, k, T, marked):
    acc = np.zeros(n * k)
    probs = np.empty(T)
    for t in range(T):
        sq = x * x
        acc += sq
        probs[t] = sq[marked * k:(marked + 1) * k].sum()
        blocks = x.reshape(n, k) * signs[:, None]
        x = (2.0 * blocks.mean(axis=1, keepdims=True) - blocks).ravel()[rev]
    return acc, probs, x


if numba is not None:
    @numba.njit(cache=True)
    def _trajectory_kernel(x, rev, signs, n, k, T, marked):  # pragma: no cover - compiled
        acc = np.zeros(n * k)
        probs = np.empty(T)
        y = np.empty(n * k)
        x = x.copy()
        for t in range(T):
            p = 0.0
            for i in range(n * k):
                sq = x[i] * x[i]
                acc[i] += sq
            for j in range(k):
                p += x[marked * k + j] * x[marked * k + j]
            probs[t] = p
            for u in range(n):
                s = 0.0
                for j in range(k):
                    s += x[u * k + j]
                m = 2.0 * s / k
                for j in range(k):
                    # the oracle sign is constant on a block, so it commutes with the coin
                    y[u * k + j] = signs[u] * (m - x[u * k + j])
            for i in range(n * k):
                x[i] = y[rev[i]]
        return acc, probs, x

    _trajectory = _trajectory_kernel
else:  # pragma: no cover
    _trajectory = _trajectory_numpy


def simulate(ops: WalkOperators, T: int, backend: str = "auto"):
    """Run ``T`` steps from the initial state.

    Returns ``(accumulated |x_t|^2 over t < T, search probability per t,
    x_T)``. The walk matrix is real, so the state is kept in float64.
    ``backend`` is ``"auto"`` (compiled kernel when numba is present) or
    ``"numpy"``.
    """
    if T < 0:
        raise ValueError("T must be non-negative")
    x0 = np.full(ops.arcs.size, 1.0 / np.sqrt(ops.arcs.size))
    signs = ops.oracle_signs()
    rev = np.ascontiguousarray(ops.arcs.rev)
    run = _trajectory_numpy if backend == "numpy" else _trajectory
    return run(x0, rev, signs, ops.n, ops.k, int(T), ops.marked)


def evolve(ops: WalkOperators, t: int) -> np.ndarray:
    """State ``U^t x0`` as a complex vector."""
    _, _, x = simulate(ops, t)
    return x.astype(complex)


def search_probability_at(ops: WalkOperators, t: int) -> float:
    if t < 0:
        raise ValueError("t must be non-negative")
    x = evolve(ops, t).real
    a, k = ops.marked, ops.k
    return float(np.sum(x[a * k:(a + 1) * k] ** 2))


def time_average_distribution(ops: WalkOperators, T: int) -> np.ndarray:
    """Cesaro average of the arc distribution over ``t = 0..T-1``."""
    if T < 1:
        raise ValueError("T must be >= 1")
    acc, _, _ = simulate(ops, T)
    return acc / T


def empirical_average_search_probability(ops: WalkOperators, T: int) -> float:
    dist = time_average_distribution(ops, T)
    a, k = ops.marked, ops.k
    return float(dist[a * k:(a + 1) * k].sum())
