"""Dense graphs, named families and distance-regular structure.

Vertices are ``0..n-1``. Each vertex keeps its neighbours in ascending label
order; the arc layout of the walk and the clone rows of the augmented matrix
both depend on that order, so it is fixed at construction.

Family labelings (all lexicographic):

* ``hamming(d, q)``: tuples in ``product(range(q), repeat=d)``.
* ``johnson(v, m)`` and ``petersen``: ``m``-subsets from ``combinations(range(v), m)``.
* ``paley(q)``: residues ``0..q-1``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    GraphError,
    InvalidArrayError,
    NotDistanceRegularError,
    NotEquitableError,
    ParseError,
    SizeCapError,
)

DEFAULT_MAX_N = 4096


def max_vertices() -> int:
    """Dense size cap; ``DTQW_MAX_N`` overrides the default of 4096."""
    raw = os.environ.get("DTQW_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise GraphError(f"DTQW_MAX_N must be an integer, got {raw!r}") from None
    if value < 1:
        raise GraphError("DTQW_MAX_N must be positive")
    return value


def _check_size(n: int) -> None:
    cap = max_vertices()
    if n > cap:
        raise SizeCapError(f"{n} vertices exceeds the size cap of {cap} (set DTQW_MAX_N)")


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple undirected graph backed by a dense 0/1 adjacency matrix."""

    adjacency: np.ndarray
    name: str = ""

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=np.int64, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphError("adjacency must be a square matrix")
        if adj.shape[0] < 1:
            raise GraphError("graph must have at least one vertex")
        _check_size(adj.shape[0])
        if not np.isin(adj, (0, 1)).all():
            raise GraphError("adjacency entries must be 0 or 1")
        if np.any(np.diag(adj)):
            raise GraphError(f"loop at vertex {int(np.flatnonzero(np.diag(adj))[0])}")
        if not np.array_equal(adj, adj.T):
            u, v = np.argwhere(adj != adj.T)[0]
            raise GraphError(f"adjacency not symmetric at ({u}, {v})")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in np.flatnonzero(row)) for row in self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    @property
    def is_regular(self) -> bool:
        return bool(np.all(self.degrees == self.degrees[0]))

    @property
    def k(self) -> int:
        """Common degree; raises if the graph is not regular."""
        if not self.is_regular:
            raise GraphError(f"{self.name or 'graph'} is not regular")
        return int(self.degrees[0])

    def edges(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in np.argwhere(np.triu(self.adjacency, 1))]

    def check_vertex(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.n:
            raise GraphError(f"vertex {a!r} out of range for {self.n} vertices")
        return int(a)

    def __repr__(self) -> str:
        label = self.name or "Graph"
        return f"<{label}: n={self.n}, edges={self.num_edges}>"


def from_edges(n: int, edges, name: str = "") -> Graph:
    adj = np.zeros((n, n), dtype=np.int64)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) out of range")
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        adj[u, v] = adj[v, u] = 1
    return Graph(adj, name)


# ---------------------------------------------------------------- families


def build_complete(n: int) -> Graph:
    if n < 3:
        raise GraphError("complete graph needs n >= 3 (the coin is undefined for k < 2)")
    _check_size(n)
    return Graph(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64), f"complete({n})")


def build_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    _check_size(n)
    idx = np.arange(n)
    adj = np.zeros((n, n), dtype=np.int64)
    adj[idx, (idx + 1) % n] = 1
    adj[(idx + 1) % n, idx] = 1
    return Graph(adj, f"cycle({n})")


def build_path(n: int) -> Graph:
    if n < 2:
        raise GraphError("path needs n >= 2")
    return from_edges(n, [(i, i + 1) for i in range(n - 1)], f"path({n})")


def build_hamming(d: int, q: int) -> Graph:
    if d < 1 or q < 2 or d * (q - 1) < 2:
        raise GraphError(f"hamming({d},{q}) needs d >= 1, q >= 2 and valency d(q-1) >= 2")
    _check_size(q**d)
    words = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64)
    diff = (words[:, None, :] != words[None, :, :]).sum(axis=2)
    return Graph((diff == 1).astype(np.int64), f"hamming({d},{q})")


def build_hypercube(d: int) -> Graph:
    if d < 2:
        raise GraphError("hypercube needs dimension >= 2")
    g = build_hamming(d, 2)
    return Graph(g.adjacency, f"hypercube({d})")


def _subset_graph(v: int, m: int, meet: int) -> np.ndarray:
    subsets = list(itertools.combinations(range(v), m))
    _check_size(len(subsets))
    ind = np.zeros((len(subsets), v), dtype=np.int64)
    for i, s in enumerate(subsets):
        ind[i, list(s)] = 1
    adj = (ind @ ind.T == meet).astype(np.int64)
    np.fill_diagonal(adj, 0)
    return adj


def build_johnson(v: int, m: int) -> Graph:
    if not (1 <= m < v) or m * (v - m) < 2:
        raise GraphError(f"johnson({v},{m}) needs 1 <= m < v and valency m(v-m) >= 2")
    return Graph(_subset_graph(v, m, m - 1), f"johnson({v},{m})")


def build_petersen() -> Graph:
    return Graph(_subset_graph(5, 2, 0), "petersen")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % p for p in range(2, int(q**0.5) + 1))


def build_paley(q: int) -> Graph:
    # prime fields only; prime powers would need GF(q) arithmetic
    if not _is_prime(q) or q % 4 != 1:
        raise GraphError(f"paley({q}) needs a prime q with q = 1 mod 4")
    _check_size(q)
    residues = np.zeros(q, dtype=bool)
    residues[[(x * x) % q for x in range(1, q)]] = True
    idx = np.arange(q)
    adj = residues[(idx[:, None] - idx[None, :]) % q].astype(np.int64)
    return Graph(adj, f"paley({q})")


FAMILIES = {
    "complete": (build_complete, 1),
    "cycle": (build_cycle, 1),
    "path": (build_path, 1),
    "petersen": (build_petersen, 0),
    "hypercube": (build_hypercube, 1),
    "hamming": (build_hamming, 2),
    "johnson": (build_johnson, 2),
    "paley": (build_paley, 1),
}


def build_family(name: str, *params: int) -> Graph:
    """Build a named family member, e.g. ``build_family("hamming", 2, 3)``."""
    try:
        builder, arity = FAMILIES[name]
    except KeyError:
        raise GraphError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    if len(params) != arity:
        raise GraphError(f"family {name!r} takes {arity} parameter(s), got {len(params)}")
    for p in params:
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise GraphError(f"family parameters must be integers, got {p!r}")
    return builder(*(int(p) for p in params))


# ----------------------------------------------------------- edge-list I/O


def parse_edge_list(text: str, name: str = "") -> Graph:
    """Parse ``n`` followed by one ``u v`` edge per line; ``#`` starts a comment."""
    n = None
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if n is None:
            if len(values) != 1 or values[0] < 1:
                raise ParseError("first line must be a positive vertex count", lineno)
            n = values[0]
            if n > max_vertices():
                raise ParseError(f"{n} vertices exceeds the size cap of {max_vertices()}", lineno)
            continue
        if len(values) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = values
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno)
        if u == v:
            raise ParseError(f"loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"repeated edge {{{u}, {v}}}", lineno)
        seen.add(key)
        edges.append(key)
    if n is None:
        raise ParseError("missing vertex count")
    return from_edges(n, edges, name)


def read_edge_list(path: str | os.PathLike) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(), name=path.stem)


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- partitions


@dataclass(frozen=True)
class Partition:
    """Ordered vertex partition; ``cells[i]`` is sorted."""

    cells: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        cells = tuple(tuple(sorted(int(v) for v in c)) for c in self.cells)
        if any(len(c) == 0 for c in cells):
            raise GraphError("partition has an empty cell")
        flat = [v for c in cells for v in c]
        if len(flat) != len(set(flat)):
            raise GraphError("partition cells overlap")
        if sorted(flat) != list(range(self.n)):
            raise GraphError(f"partition does not cover vertices 0..{self.n - 1}")
        object.__setattr__(self, "cells", cells)

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def characteristic_matrix(self) -> np.ndarray:
        P = np.zeros((self.n, len(self.cells)), dtype=np.int64)
        for j, cell in enumerate(self.cells):
            P[list(cell), j] = 1
        return P

    def cell_of(self) -> np.ndarray:
        labels = np.empty(self.n, dtype=np.int64)
        for j, cell in enumerate(self.cells):
            labels[list(cell)] = j
        return labels


@dataclass(frozen=True, eq=False)
class QuotientMatrix:
    entries: np.ndarray
    partition: Partition

    def __eq__(self, other):
        if isinstance(other, QuotientMatrix):
            return np.array_equal(self.entries, other.entries)
        return NotImplemented

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def distances_from(g: Graph, a: int) -> np.ndarray:
    """BFS distances from ``a``; unreachable vertices get -1."""
    a = g.check_vertex(a)
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[a] = 0
    frontier = np.zeros(g.n, dtype=bool)
    frontier[a] = True
    adj = g.adjacency.astype(bool)
    level = 0
    while frontier.any():
        level += 1
        reached = adj[frontier].any(axis=0) & (dist < 0)
        dist[reached] = level
        frontier = reached
    return dist


def is_connected(g: Graph) -> bool:
    return bool(np.all(distances_from(g, 0) >= 0))


def distance_partition(g: Graph, a: int) -> Partition:
    dist = distances_from(g, a)
    if np.any(dist < 0):
        raise GraphError(f"graph is disconnected: vertex {int(np.flatnonzero(dist < 0)[0])} "
                         f"is unreachable from {a}")
    cells = [tuple(np.flatnonzero(dist == i).tolist()) for i in range(int(dist.max()) + 1)]
    return Partition(tuple(cells), g.n)


def check_equitable(g: Graph, p: Partition) -> QuotientMatrix:
    """Return the quotient ``B`` with ``A P = P B``.

    Raises NotEquitableError naming a (vertex, cell) witness otherwise.
    """
    if p.n != g.n:
        raise GraphError("partition and graph have different vertex counts")
    counts = g.adjacency @ p.characteristic_matrix()
    B = np.zeros((len(p), len(p)), dtype=np.int64)
    for i, cell in enumerate(p.cells):
        rows = counts[list(cell)]
        bad = np.argwhere(rows != rows[0])
        if len(bad):
            r, j = bad[0]
            raise NotEquitableError(cell[r], int(j))
        B[i] = rows[0]
    return QuotientMatrix(B, p)


def is_equitable(g: Graph, p: Partition) -> bool:
    try:
        check_equitable(g, p)
    except NotEquitableError:
        return False
    return True


# -------------------------------------------------------- intersection arrays


@dataclass(frozen=True)
class IntersectionArray:
    """Validated intersection array ``{b0..b_{d-1}; c1..c_d}``.

    Construction runs every feasibility check, so an instance is always valid.
    """

    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        b = tuple(self.b)
        c = tuple(self.c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if len(b) == 0 or len(b) != len(c):
            raise InvalidArrayError("shape", f"need len(b) == len(c) >= 1, got {len(b)} and {len(c)}")
        for x in b + c:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise InvalidArrayError("integer", f"entries must be integers, got {x!r}")
        if any(x <= 0 for x in b + c):
            raise InvalidArrayError("positivity", "all b_i and c_i must be positive")
        if c[0] != 1:
            raise InvalidArrayError("c1", f"c1 must equal 1, got {c[0]}")
        ks = [1]
        for i in range(len(b)):
            nxt = Fraction(b[i] * ks[i], c[i])
            if nxt.denominator != 1:
                raise InvalidArrayError(
                    "integrality",
                    f"k_{i + 1} = b_{i}*k_{i}/c_{i + 1} = {b[i] * ks[i]}/{c[i]} is not an integer",
                )
            ks.append(int(nxt))
        for i, ai in enumerate(self._a_values()):
            if ai < 0:
                raise InvalidArrayError("nonnegative_a", f"a_{i} = k - b_{i} - c_{i} = {ai} < 0")
        object.__setattr__(self, "_ks", tuple(ks))

    def _a_values(self) -> list[int]:
        k = self.b[0]
        bb = list(self.b) + [0]
        cc = [0] + list(self.c)
        return [k - bb[i] - cc[i] for i in range(self.d + 1)]

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def k(self) -> int:
        return int(self.b[0])

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a_values())

    @property
    def ks(self) -> tuple[int, ...]:
        return self._ks

    @property
    def n(self) -> int:
        return int(sum(self._ks))

    def b_ext(self, i: int) -> int:
        """b_i with the convention b_d = 0."""
        return int(self.b[i]) if i < self.d else 0

    def c_ext(self, i: int) -> int:
        """c_i with the convention c_0 = 0."""
        return int(self.c[i - 1]) if i >= 1 else 0

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    def to_string(self) -> str:
        return ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c))


def validate_array(b, c) -> IntersectionArray:
    return IntersectionArray(tuple(int(x) for x in b), tuple(int(x) for x in c))


def parse_array(text: str) -> IntersectionArray:
    """Parse ``"b0,b1,...;c1,...,cd"`` (outer braces optional)."""
    body = text.strip().removeprefix("{").removesuffix("}")
    parts = body.split(";")
    if len(parts) != 2:
        raise ParseError(f"intersection array needs exactly one ';', got {text!r}")
    try:
        b, c = ([int(x) for x in part.split(",") if x.strip()] for part in parts)
    except ValueError:
        raise ParseError(f"non-integer entry in {text!r}") from None
    return validate_array(b, c)


def intersection_array_of(g: Graph) -> IntersectionArray:
    """Intersection array of a distance-regular graph.

    Every vertex's distance partition must be equitable with the same
    tridiagonal quotient; otherwise NotDistanceRegularError names a vertex.
    """
    if not g.is_regular:
        raise GraphError("distance regularity presupposes a regular graph")
    if not is_connected(g):
        raise GraphError("graph is disconnected")
    reference = None
    for a in range(g.n):
        try:
            B = check_equitable(g, distance_partition(g, a)).entries
        except NotEquitableError as exc:
            raise NotDistanceRegularError(
                a, f"distance partition from vertex {a} is not equitable "
                   f"(vertex {exc.vertex}, cell {exc.cell})") from None
        if reference is None:
            reference = B
        elif B.shape != reference.shape or not np.array_equal(B, reference):
            raise NotDistanceRegularError(a, f"vertex {a} has a different distance quotient than vertex 0")
    d = reference.shape[0] - 1
    b = [int(reference[i, i + 1]) for i in range(d)]
    c = [int(reference[i + 1, i]) for i in range(d)]
    return validate_array(b, c)


def is_distance_regular(g: Graph) -> bool:
    try:
        intersection_array_of(g)
    except (GraphError, NotDistanceRegularError):
        return False
    return True


# ------------------------------------------------- deletion and connectivity


def vertex_deleted(g: Graph, a: int) -> tuple[Graph, np.ndarray]:
    """``X minus a`` plus the map from new labels to original labels."""
    a = g.check_vertex(a)
    keep = np.array([v for v in range(g.n) if v != a], dtype=np.int64)
    sub = g.adjacency[np.ix_(keep, keep)]
    name = f"{g.name}-{a}" if g.name else ""
    return Graph(sub, name), keep


def laplacian_minor(g: Graph, a: int) -> np.ndarray:
    """``L(X)`` with row and column ``a`` removed, i.e. ``kI - A(X minus a)``."""
    k = g.k
    sub, _ = vertex_deleted(g, a)
    return k * np.eye(sub.n, dtype=np.int64) - sub.adjacency


def articulation_points(g: Graph) -> list[int]:
    """Cut vertices, by iterative Tarjan low-link DFS from vertex 0."""
    n = g.n
    nbrs = g.neighbors
    disc = [-1] * n
    low = [0] * n
    cuts: set[int] = set()
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(nbrs[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, u, iter(nbrs[w])))
                    advanced = True
                    break
                if w != parent:
                    low[u] = min(low[u], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent < 0:
                continue
            low[parent] = min(low[parent], low[u])
            if parent == root:
                root_children += 1
            elif low[u] >= disc[parent]:
                cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return sorted(cuts)


def is_two_connected(g: Graph) -> bool:
    """Connected, at least 3 vertices, and no cut vertex."""
    if g.n < 3:
        return False
    return is_connected(g) and not articulation_points(g)
