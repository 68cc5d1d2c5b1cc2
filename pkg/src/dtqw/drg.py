"""Intersection-array analytics for distance-regular graphs.

Tridiagonal quotients, their orthogonal polynomials, the bounds used in the
limit argument, and sweeps over graph families.

Polynomials are stored as ascending coefficient lists. Integer inputs keep
integer coefficients, so identities such as ``q_{d-1}(k) = c_2 ... c_d``
are checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoundViolationError, SizeCapError
from .graphs import (
    Graph,
    IntersectionArray,
    build_family,
    intersection_array_of,
    laplacian_minor,
    distance_partition,
    max_vertices,
)
from .spectral import closed_form_average, deleted_decomposition, sym_eig

SLACK_TOL = 1e-9


@dataclass(frozen=True)
class Tridiagonal:
    """``diag[0..m]``, ``upper[0..m-1]`` (beta) and ``lower[0..m-1]`` (gamma_1..gamma_m)."""

    diag: tuple
    upper: tuple
    lower: tuple

    def __post_init__(self):
        if len(self.upper) != len(self.diag) - 1 or len(self.lower) != len(self.diag) - 1:
            raise ValueError("off-diagonals must be one shorter than the diagonal")
        if any(x <= 0 for x in self.upper + self.lower):
            raise ValueError("off-diagonal entries must be positive")

    @property
    def size(self) -> int:
        return len(self.diag)

    def to_matrix(self, m: int | None = None) -> np.ndarray:
        """Leading ``m x m`` principal block (whole matrix by default)."""
        m = self.size if m is None else m
        T = np.zeros((m, m))
        for i in range(m):
            T[i, i] = self.diag[i]
            if i + 1 < m:
                T[i, i + 1] = self.upper[i]
                T[i + 1, i] = self.lower[i]
        return T

    def symmetrized(self, m: int | None = None) -> np.ndarray:
        """Similar symmetric matrix with off-diagonals ``sqrt(beta_i gamma_{i+1})``."""
        m = self.size if m is None else m
        T = np.diag(np.array(self.diag[:m], dtype=float))
        off = np.sqrt(np.array(self.upper[: m - 1], dtype=float) * np.array(self.lower[: m - 1], dtype=float))
        T += np.diag(off, 1) + np.diag(off, -1)
        return T


def quotient_B(arr: IntersectionArray) -> Tridiagonal:
    return Tridiagonal(arr.a, tuple(arr.b), tuple(arr.c))


def quotient_S(arr: IntersectionArray) -> Tridiagonal:
    """Quotient of the distance partition read from distance ``d`` down to 0."""
    return Tridiagonal(arr.a[::-1], tuple(arr.c[::-1]), tuple(arr.b[::-1]))


def quotient_Shat(arr: IntersectionArray) -> np.ndarray:
    return quotient_S(arr).symmetrized()


# ------------------------------------------------------------ polynomials


def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class PolySeq:
    """``polys[i]`` is ``det(x I - T_i)`` for ``i = 0..m+1`` (ascending coefficients)."""

    polys: tuple[tuple, ...]
    source: Tridiagonal

    def __len__(self) -> int:
        return len(self.polys)

    def __call__(self, i: int, x):
        return _poly_eval(self.polys[i], x)

    def roots(self, i: int) -> np.ndarray:
        return _roots_by_interlacing(self)[i]

    def eigvec(self, lam: float, m: int | None = None) -> np.ndarray:
        return eigvec_from_polys(self, lam, m)


def orthopoly(t: Tridiagonal) -> PolySeq:
    """Three-term recurrence ``p_{i+1} = (x - alpha_i) p_i - beta_{i-1} gamma_i p_{i-1}``."""
    polys = [(1,)]
    prev = (0,)
    for i in range(t.size):
        cur = polys[-1]
        shifted = (0,) + cur
        nxt = [0] * (len(cur) + 1)
        for j, c in enumerate(shifted):
            nxt[j] += c
        for j, c in enumerate(cur):
            nxt[j] -= t.diag[i] * c
        if i > 0:
            w = t.upper[i - 1] * t.lower[i - 1]
            for j, c in enumerate(prev):
                nxt[j] -= w * c
        prev = cur
        polys.append(tuple(nxt))
    return PolySeq(tuple(polys), t)


def _bisect(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = f(lo)
    if flo == 0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _roots_by_interlacing(seq: PolySeq) -> list[np.ndarray]:
    """Roots of every ``p_i``, bracketed by the roots of ``p_{i-1}``."""
    t = seq.source
    T = t.to_matrix()
    bound = float(np.max(np.abs(T).sum(axis=1))) + 1.0
    out = [np.array([])]
    for i in range(1, len(seq)):
        f = lambda x, i=i: float(seq(i, x))
        edges = [-bound] + list(out[-1]) + [bound]
        out.append(np.array([_bisect(f, edges[j], edges[j + 1]) for j in range(i)]))
    return out


def check_interlacing(seq: PolySeq) -> bool:
    """``p_i`` alternates in sign at the roots of ``p_{i+1}``, for every ``i >= 1``.

    Strict alternation at the ``i+1`` sorted roots of ``p_{i+1}`` forces
    exactly one root of ``p_i`` between consecutive roots.
    """
    roots = _roots_by_interlacing(seq)
    for i in range(1, len(seq) - 1):
        r = np.sort(roots[i + 1])
        if np.any(np.diff(r) <= 0):
            return False
        vals = np.array([float(seq(i, x)) for x in r])
        if np.any(vals == 0) or np.any(np.sign(vals[1:]) == np.sign(vals[:-1])):
            return False
    return True


def eigvec_from_polys(seq: PolySeq, lam: float, m: int | None = None) -> np.ndarray:
    """Eigenvector of the leading ``m x m`` block ``T_m`` for a root of ``p_m``.

    Entries are ``p_i(lam) / (beta_0 ... beta_{i-1})`` for ``i < m``; the
    trailing ``p_m(lam)`` term vanishes and is dropped. ``m`` defaults to
    the full matrix, whose characteristic polynomial is ``p_{m+1}``.
    """
    t = seq.source
    m = t.size if m is None else m
    scale = max(1.0, float(np.abs(t.to_matrix(m)).sum(axis=1).max())) ** m
    if abs(float(seq(m, lam))) > 1e-8 * scale:
        raise ValueError(f"{lam} is not a root of p_{m}")
    z = np.empty(m)
    denom = 1.0
    for i in range(m):
        z[i] = float(seq(i, lam)) / denom
        if i < m - 1:
            denom *= t.upper[i]
    return z


def dual_polys(arr: IntersectionArray) -> PolySeq:
    """``q_i = det(x I - S_i)`` for the reversed quotient ``S``."""
    return orthopoly(quotient_S(arr))


def largest_deleted_root(arr: IntersectionArray) -> float:
    """Largest root of ``q_d``: the top eigenvalue of ``X minus a``.

    Computed from the symmetrised ``d x d`` block of ``S``; for ``d <= 3``
    the bisection root of ``q_d`` must agree within ``1e-9``.
    """
    S = quotient_S(arr)
    lam = float(sym_eig(S.symmetrized(arr.d)).eigenvalues.max())
    if arr.d <= 3:
        alt = float(dual_polys(arr).roots(arr.d).max())
        if abs(alt - lam) > 1e-9 * max(1.0, lam):
            raise ArithmeticError(f"root paths disagree: {lam} vs {alt}")
    return lam


# ----------------------------------------------------------------- bounds


@dataclass(frozen=True)
class BoundResult:
    name: str
    bound: float
    actual: float | None = None

    @property
    def slack(self) -> float | None:
        return None if self.actual is None else self.actual - self.bound


def _assert_slack(res: BoundResult) -> BoundResult:
    if res.slack is not None and res.slack < -SLACK_TOL:
        raise BoundViolationError(f"{res.name}: actual {res.actual} below bound {res.bound}")
    return res


def _top_eigenpair(g: Graph, a: int):
    decomp, labels = deleted_decomposition(g, a)
    return decomp[len(decomp) - 1], labels


def bound_evE1(arr: IntersectionArray, graph: Graph | None = None, a: int = 0) -> BoundResult:
    """Lower bound ``((n-1)/n) (q_{d-1}(lam)/q_{d-1}(k))^2`` on ``e_v^T E_lam 1``.

    ``lam`` is the largest eigenvalue of ``X minus a``. With ``graph`` the
    actual value is computed and the bound asserted.
    """
    q = dual_polys(arr)
    lam = largest_deleted_root(arr)
    n, k, d = arr.n, arr.k, arr.d
    # d = 1: q_0 = 1 and the ratio is 1
    ratio = float(q(d - 1, lam)) / float(q(d - 1, k))
    bound = (n - 1) / n * ratio**2
    actual = None
    if graph is not None:
        top, labels = _top_eigenpair(graph, a)
        if abs(top.value - lam) > 1e-7:
            raise ArithmeticError(f"largest eigenvalue {top.value} of X minus a differs from root {lam}")
        v = int(np.searchsorted(labels, graph.neighbors[a][0]))
        actual = float(top.projection[v].sum())
    return _assert_slack(BoundResult("evE1", bound, actual))


def bound_lambda(arr: IntersectionArray, graph: Graph | None = None, a: int = 0) -> BoundResult:
    """``k - 2k/n`` as a lower bound on the largest eigenvalue of ``X minus a``."""
    bound = arr.k - 2 * arr.k / arr.n
    actual = None
    if graph is not None:
        actual = float(_top_eigenpair(graph, a)[0].value)
    return _assert_slack(BoundResult("lambda_max", bound, actual))


def laplacian_minor_solution(arr: IntersectionArray) -> list[Fraction]:
    """Cell values ``z_1..z_d`` of ``(L(X) minus a)^{-1} 1``, exactly.

    ``z_1 = (n-1)/k`` and ``z_{i+1} - z_i = (k_{i+1} + ... + k_d) / (k_i b_i)``.
    """
    ks, b = arr.ks, arr.b
    z = [Fraction(arr.n - 1, arr.k)]
    for i in range(1, arr.d):
        z.append(z[-1] + Fraction(sum(ks[i + 1:]), ks[i] * b[i]))
    return z


def laplacian_minor_check(arr: IntersectionArray, graph: Graph, a: int = 0) -> float:
    """Max deviation between the expanded cell values and a direct solve."""
    z = laplacian_minor_solution(arr)
    L = laplacian_minor(graph, a).astype(float)
    y = np.linalg.solve(L, np.ones(L.shape[0]))
    dist = np.empty(graph.n, dtype=np.int64)
    for i, cell in enumerate(distance_partition(graph, a).cells):
        dist[list(cell)] = i
    keep = [u for u in range(graph.n) if u != a]
    expected = np.array([float(z[dist[u] - 1]) for u in keep])
    return float(np.max(np.abs(expected - y)))


def main_sum(g: Graph, a: int = 0) -> float:
    """``sum_lam (E_lam J E_lam)_vv = sum_lam (e_v^T E_lam 1)^2`` for a neighbour ``v``."""
    decomp, labels = deleted_decomposition(g, a)
    v = int(np.searchsorted(labels, g.neighbors[a][0]))
    return float(sum(e.projection[v].sum() ** 2 for e in decomp))


def s1_lower_bound(g: Graph, a: int = 0) -> BoundResult:
    """``(1/4)((n-1)/n) sum_lam (E_lam J E_lam)_vv``, asserted strictly below ``s1``."""
    n = g.n
    bound = 0.25 * (n - 1) / n * main_sum(g, a)
    s1 = closed_form_average(g, a).s1
    res = BoundResult("s1", bound, s1)
    if not s1 > bound - SLACK_TOL:
        raise BoundViolationError(f"s1 = {s1} does not exceed the bound {bound}")
    return res


def srg_candidate_main_sum(arr: IntersectionArray) -> float:
    """Candidate closed form of the main sum for strongly regular graphs.

    It does not match :func:`main_sum` on the Petersen graph (1.5 against 2/3),
    so it is reported next to the computed value and never used.
    """
    k, a1 = arr.k, arr.a[1]
    c2 = arr.c[1] if arr.d >= 2 else 0
    top = (k - a1 + c2) ** 2 - 4 * c2
    return top / (top - 2 * (k - a1 - 1))


def limit_criterion(arr: IntersectionArray) -> tuple[float, float]:
    """``(k^{d-1} / (c_2 ... c_d n), k^{d-1} / n)``; the empty c-product is 1."""
    num = arr.k ** (arr.d - 1)
    cprod = math.prod(arr.c[1:])
    return num / (cprod * arr.n), num / arr.n


def deleted_eigvec_residual(arr: IntersectionArray, graph: Graph, a: int = 0) -> float:
    """Expand ``y_lam`` through the reversed distance partition and test it on ``X minus a``.

    ``y_lam = (u_0(lam) .. u_{d-1}(lam))`` for the largest root of ``q_d``;
    entry ``i`` is placed on the vertices at distance ``d - i`` from ``a``.
    Returns ``||A y - lam y|| / ||y||``.
    """
    q = dual_polys(arr)
    lam = largest_deleted_root(arr)
    y = eigvec_from_polys(q, lam, arr.d)
    cells = distance_partition(graph, a).cells
    vec = np.zeros(graph.n)
    for i in range(arr.d):
        vec[list(cells[arr.d - i])] = y[i]
    keep = [u for u in range(graph.n) if u != a]
    x = vec[keep]
    A = graph.adjacency[np.ix_(keep, keep)]
    return float(np.linalg.norm(A @ x - lam * x) / np.linalg.norm(x))


# ------------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class SweepRow:
    param: tuple
    n: int | None
    k: int | None
    total: float | None
    deviation: float | None  # |total - 1/4|
    criterion: float | None
    criterion_simple: float | None
    status: str = "ok"


@dataclass(frozen=True)
class SweepResult:
    family: str
    rows: tuple[SweepRow, ...]

    def _devs(self) -> list[float]:
        return [r.deviation for r in self.rows if r.deviation is not None]

    @property
    def monotone(self) -> bool:
        """``|total - 1/4|`` strictly decreasing across every evaluated member."""
        d = self._devs()
        return len(d) >= 2 and all(x > y for x, y in zip(d, d[1:]))

    @property
    def overall_decreasing(self) -> bool:
        """Last evaluated deviation below the first."""
        d = self._devs()
        return len(d) >= 2 and d[-1] < d[0]


def _estimate_size(family: str, params: tuple) -> int | None:
    sizes = {
        "complete": lambda n: n,
        "cycle": lambda n: n,
        "path": lambda n: n,
        "paley": lambda q: q,
        "hypercube": lambda d: 2**d,
        "hamming": lambda d, q: q**d,
        "johnson": lambda v, m: math.comb(v, m),
        "petersen": lambda: 10,
    }
    try:
        return sizes[family](*params)
    except (KeyError, TypeError):
        return None


def family_sweep(family: str, params) -> SweepResult:
    """Closed-form totals and criterion values over a list of family members.

    Each item of ``params`` is an int or a tuple of ints. Members above the
    size cap are reported with status ``skipped``.
    """
    rows = []
    for p in params:
        p = tuple(p) if isinstance(p, (tuple, list)) else (p,)
        size = _estimate_size(family, p)
        if size is not None and size > max_vertices():
            rows.append(SweepRow(p, size, None, None, None, None, None, "skipped"))
            continue
        try:
            g = build_family(family, *p)
        except SizeCapError:
            rows.append(SweepRow(p, size, None, None, None, None, None, "skipped"))
            continue
        arr = intersection_array_of(g)
        rep = closed_form_average(g, 0)
        c1, c2 = limit_criterion(arr)
        rows.append(SweepRow(p, g.n, g.k, rep.total, abs(rep.total - 0.25), c1, c2))
    return SweepResult(family, tuple(rows))
