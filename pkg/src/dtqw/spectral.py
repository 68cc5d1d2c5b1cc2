"""Eigendecompositions, the augmented clone matrix and closed-form averages.

Sign convention. With the oracle ``O_a = (2E_aa - I) (x) I`` the product
``C O_a`` equals ``I - (2/k) N N*``, so the walk ``U = R C O_a`` is the
negative of the reflection product ``W = R (2/k N N* - I)`` whose
eigenspaces the clone matrix describes. An eigenvalue ``e^{i theta}`` of
``W`` is the eigenvalue ``-e^{i theta}`` of ``U`` with the same eigenspace.
Probabilities ``|U^t x0|^2`` do not see the global sign, so every
time-averaged quantity is the same for ``U`` and ``W``; phases reported
here (``theta``, ``F_theta``) refer to ``W``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, GraphError, HypothesisError, NotEquitableError
from .graphs import (
    Graph,
    check_equitable,
    distance_partition,
    is_connected,
    is_two_connected,
    vertex_deleted,
)

MAX_SWEEPS = 50


# ------------------------------------------------------------------ Jacobi


def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: ``m - 1`` rounds of disjoint pairs covering all pairs."""
    players = list(range(m)) if m % 2 == 0 else list(range(m)) + [-1]
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            p, q = players[i], players[size - 1 - i]
            if p >= 0 and q >= 0:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.int64), np.array(qs, dtype=np.int64)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigh(M: np.ndarray, tol: float = 1e-13, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi diagonalisation of a real symmetric matrix.

    Each round rotates a set of disjoint index pairs at once, so a sweep is
    ``m - 1`` vectorised rounds. Stops when the off-diagonal Frobenius norm
    drops below ``tol * ||M||_F``. Returns ascending eigenvalues and the
    orthogonal matrix of eigenvectors (columns).
    """
    A = np.array(M, dtype=float, copy=True)
    m = A.shape[0]
    V = np.eye(m)
    scale = np.linalg.norm(A)
    if m <= 1 or scale == 0.0:
        return np.diag(A).copy(), V
    target = tol * scale
    rounds = _round_robin(m)
    for _ in range(max_sweeps):
        off = _off_norm(A)
        if off <= target:
            break
        for p, q in rounds:
            apq = A[p, q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (A[q, q] - A[p, p]) / (2.0 * apq)
            sgn = np.where(theta >= 0.0, 1.0, -1.0)
            t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            Ap, Aq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = c * Ap - s * Aq
            A[:, q] = s * Ap + c * Aq
            Ap, Aq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            A[p, q] = A[q, p] = 0.0
            Vp, Vq = V[:, p].copy(), V[:, q].copy()
            V[:, p] = c * Vp - s * Vq
            V[:, q] = s * Vp + c * Vq
    else:
        off = _off_norm(A)
        if off > target:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3e})")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


# --------------------------------------------------- spectral decompositions


@dataclass(frozen=True, eq=False)
class Eigenpair:
    value: float
    projection: np.ndarray
    multiplicity: int


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (ascending) with orthogonal projections."""

    eigenpairs: tuple[Eigenpair, ...]
    group_tol: float
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([e.value for e in self.eigenpairs])

    @property
    def multiplicities(self) -> list[int]:
        return [e.multiplicity for e in self.eigenpairs]

    def __len__(self) -> int:
        return len(self.eigenpairs)

    def __iter__(self):
        return iter(self.eigenpairs)

    def __getitem__(self, r: int) -> Eigenpair:
        return self.eigenpairs[r]

    def find(self, value: float, tol: float | None = None) -> Eigenpair | None:
        """Eigenpair whose eigenvalue is within ``tol`` (default group_tol) of ``value``."""
        tol = self.group_tol if tol is None else tol
        best = min(self.eigenpairs, key=lambda e: abs(e.value - value), default=None)
        if best is not None and abs(best.value - value) <= tol:
            return best
        return None

    def reconstruct(self) -> np.ndarray:
        return sum(e.value * e.projection for e in self.eigenpairs)


def default_group_tol(M: np.ndarray) -> float:
    return 1e-8 * max(1.0, float(np.linalg.norm(M, 2)) if M.size else 1.0)


def _group(w: np.ndarray, V: np.ndarray, tol: float, M: np.ndarray) -> SpectralDecomposition:
    pairs = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            block = V[:, start:i]
            pairs.append(Eigenpair(float(np.mean(w[start:i])), block @ block.conj().T, i - start))
            start = i
    return SpectralDecomposition(tuple(pairs), tol, M)


def sym_eig(M: np.ndarray, tol: float = 1e-13, group_tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition of a real symmetric matrix by cyclic Jacobi."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(M, M.T, rtol=0.0, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    w, V = jacobi_eigh(M, tol)
    gtol = default_group_tol(M) if group_tol is None else group_tol
    return _group(w, V, gtol, M)


def herm_eig(M: np.ndarray, tol: float = 1e-13, group_tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition of a complex Hermitian matrix.

    Uses the real symmetric embedding ``[[Re, -Im], [Im, Re]]``: every
    eigenvalue appears twice there, and the embedded projection onto the
    doubled eigenspace has blocks ``[[Re E, -Im E], [Im E, Re E]]``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(M, M.conj().T, rtol=0.0, atol=1e-12):
        raise ValueError("matrix is not Hermitian")
    m = M.shape[0]
    re, im = M.real, M.imag
    big = np.block([[re, -im], [im, re]])
    w, V = jacobi_eigh(big, tol)
    gtol = default_group_tol(M) if group_tol is None else group_tol
    doubled = _group(w, V, gtol, big)
    pairs = []
    for e in doubled:
        P = e.projection
        E = P[:m, :m] + 1j * P[m:, :m]
        if e.multiplicity % 2:
            raise ConvergenceError(f"embedded eigenvalue {e.value} has odd multiplicity; "
                                   "grouping tolerance is too fine")
        pairs.append(Eigenpair(e.value, E, e.multiplicity // 2))
    return SpectralDecomposition(tuple(pairs), gtol, M)


def projection_via_polynomial(decomp: SpectralDecomposition, r: int) -> np.ndarray:
    """``prod_{s != r} (M - mu_s I) / (mu_r - mu_s)``, which equals ``E_r``."""
    mus = decomp.eigenvalues
    M = decomp.matrix
    tol = max(decomp.group_tol, default_group_tol(M))
    if len(mus) > 1 and np.min(np.diff(np.sort(mus))) <= tol:
        raise ValueError("eigenvalues are not distinct beyond the grouping tolerance")
    out = np.eye(M.shape[0], dtype=M.dtype)
    for s, mu in enumerate(mus):
        if s != r:
            out = out @ (M - mu * np.eye(M.shape[0])) / (mus[r] - mu)
    return out


def unitary_eig(W: np.ndarray, group_tol: float = 1e-8):
    """Eigenphases and eigenprojections of a unitary matrix.

    The Hermitian combination ``H1 + c H2`` of its real and imaginary
    parts (``c`` irrational-ish to separate phases) shares eigenspaces with
    ``W``; each phase is read off as ``arg tr(W E) / tr(E)``. Returns a
    list of ``(phase in (-pi, pi], projection, multiplicity)``.
    """
    W = np.asarray(W, dtype=complex)
    H1 = (W + W.conj().T) / 2
    H2 = (W - W.conj().T) / 2j
    decomp = herm_eig(H1 + (1 / np.sqrt(7.0)) * H2, group_tol=group_tol)
    out = []
    for e in decomp:
        z = np.trace(W @ e.projection) / e.multiplicity
        if np.max(np.abs(W @ e.projection - z * e.projection)) > 1e-8:
            raise ConvergenceError("two eigenphases collided in the Hermitian combination")
        out.append((float(np.angle(z)), e.projection, e.multiplicity))
    return out


# ------------------------------------------------------- augmented matrix


def vandermonde_clone_block(k: int) -> np.ndarray:
    """``K[j, m-1] = exp(2 pi i j m / k)`` for ``j = 0..k-1``, ``m = 1..k-1``."""
    j = np.arange(k)[:, None]
    m = np.arange(1, k)[None, :]
    return np.exp(2j * np.pi * j * m / k)


def _check_walk_graph(g: Graph, a: int) -> int:
    a = g.check_vertex(a)
    if not g.is_regular:
        raise HypothesisError("regular", "graph is not regular")
    if g.k < 2:
        raise HypothesisError("valency", f"need k >= 2, got {g.k}")
    if not is_connected(g):
        raise HypothesisError("connected", "graph is disconnected")
    return a


@dataclass(frozen=True, eq=False)
class AugmentedMatrix:
    """Clone matrix: rows ``0..k-2`` are clones of ``a``, the rest are ``X minus a``.

    ``labels[i]`` is the original vertex of row ``k-1+i``;
    ``neighbor_rows[j]`` is the row of the ``j``-th neighbour of ``a``.
    """

    matrix: np.ndarray
    graph: Graph
    marked: int
    k: int
    labels: np.ndarray
    neighbor_rows: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def clones(self) -> int:
        return self.k - 1

    def ones_vector(self) -> np.ndarray:
        """``(0_{k-1}; 1_{n-1})``."""
        v = np.ones(self.dim, dtype=complex)
        v[: self.clones] = 0
        return v


def build_augmented(g: Graph, a: int) -> AugmentedMatrix:
    a = _check_walk_graph(g, a)
    k = g.k
    sub, labels = vertex_deleted(g, a)
    dim = g.n + k - 2
    At = np.zeros((dim, dim), dtype=complex)
    At[k - 1:, k - 1:] = sub.adjacency
    K = vandermonde_clone_block(k)
    rows = np.array([k - 1 + int(np.searchsorted(labels, v)) for v in g.neighbors[a]], dtype=np.int64)
    At[rows, : k - 1] = K
    At[: k - 1, rows] = K.conj().T
    return AugmentedMatrix(At, g, a, k, labels, rows)


def clone_embedding(g: Graph, a: int) -> np.ndarray:
    """The ``nk x (n+k-2)`` matrix ``N``: ``K`` on the arcs leaving ``a``, ``1_k`` elsewhere.

    Columns follow the row order of :func:`build_augmented`; rows follow the
    arc layout ``u*k + j``.
    """
    a = _check_walk_graph(g, a)
    k = g.k
    n = g.n
    N = np.zeros((n * k, n + k - 2), dtype=complex)
    N[a * k:(a + 1) * k, : k - 1] = vandermonde_clone_block(k)
    col = k - 1
    for u in range(n):
        if u == a:
            continue
        N[u * k:(u + 1) * k, col] = 1.0
        col += 1
    return N


def _reverse_rows(g: Graph, X: np.ndarray) -> np.ndarray:
    """``R X`` for the arc-reversal permutation ``R``."""
    from .walk import arc_space

    return X[arc_space(g).rev]


@dataclass(frozen=True)
class Eigenphase:
    theta: float
    value: float  # eigenvalue of the clone matrix, = k cos(theta)
    multiplicity: int
    boundary: bool  # value at +-k, outside the interior correspondence


def walk_eigenphases(g: Graph, a: int, augmented_decomp: SpectralDecomposition | None = None) -> list[Eigenphase]:
    """``theta = arccos(lambda / k)`` for each eigenvalue of the clone matrix.

    Values within relative ``1e-10`` of ``+-k`` are flagged as boundary and
    given ``theta = 0`` or ``pi``.
    """
    aug = build_augmented(g, a)
    k = aug.k
    decomp = augmented_decomp or herm_eig(aug.matrix)
    out = []
    for e in decomp:
        lam = e.value
        if abs(lam) >= k * (1 - 1e-10):
            out.append(Eigenphase(0.0 if lam > 0 else float(np.pi), lam, e.multiplicity, True))
        else:
            out.append(Eigenphase(float(np.arccos(lam / k)), lam, e.multiplicity, False))
    return out


def _f_factor(g: Graph, a: int, theta: float, conjugate: bool) -> np.ndarray:
    N = clone_embedding(g, a)
    phase = np.exp(-1j * theta) if conjugate else np.exp(1j * theta)
    return N - phase * _reverse_rows(g, N)


def reconstruct_F(g: Graph, a: int, lam: float, E_hat: np.ndarray, conjugate: bool = False) -> np.ndarray:
    """Projection onto the ``e^{i theta}`` eigenspace of the reflection walk ``W = -U``.

    ``theta = arccos(lam / k)``; ``conjugate=True`` builds the
    ``e^{-i theta}`` projection instead.
    """
    k = g.k
    if abs(lam) >= k:
        raise ValueError(f"eigenvalue {lam} is not strictly inside (-k, k); sin(theta) = 0")
    theta = float(np.arccos(lam / k))
    M = _f_factor(g, a, theta, conjugate)
    return M @ E_hat @ M.conj().T / (2 * k * np.sin(theta) ** 2)


def apply_F(g: Graph, a: int, lam: float, E_hat: np.ndarray, x: np.ndarray, conjugate: bool = False) -> np.ndarray:
    """``F_theta x`` without materialising the ``nk x nk`` projection."""
    k = g.k
    if abs(lam) >= k:
        raise ValueError(f"eigenvalue {lam} is not strictly inside (-k, k); sin(theta) = 0")
    theta = float(np.arccos(lam / k))
    M = _f_factor(g, a, theta, conjugate)
    return M @ (E_hat @ (M.conj().T @ x)) / (2 * k * np.sin(theta) ** 2)


def marked_row_value(k: int, lam: float, evE1: float) -> complex:
    """``e_(a,v)^T F_theta 1`` from the vertex-deleted spectrum alone."""
    theta = np.arccos(lam / k)
    return (1 - np.exp(1j * theta)) * evE1 / (2 * np.sin(theta) ** 2)


# -------------------------------------------------- average search probability


@dataclass(frozen=True)
class Contribution:
    value: float  # eigenvalue of X minus a
    multiplicity: int
    evE1: float  # e_v^T E_lambda 1
    s1_term: float
    s2_weight: float  # k / (k + lambda) * e_v^T E_lambda 1


@dataclass(frozen=True)
class AvgSearchReport:
    graph: str
    n: int
    k: int
    marked: int
    witness: int
    rows: tuple[Contribution, ...]
    s1: float
    s2: float
    total: float
    method: str = "closed-form"
    v_spread: float = 0.0


def deleted_decomposition(g: Graph, a: int, group_tol: float | None = None):
    sub, labels = vertex_deleted(g, a)
    return sym_eig(sub.adjacency.astype(float), group_tol=group_tol), labels


def closed_form_average(g: Graph, a: int, group_tol: float | None = None) -> AvgSearchReport:
    """Average search probability from the spectrum of ``X minus a``.

    Requires the distance partition at ``a`` to be equitable and the graph
    to be 2-connected; raises HypothesisError otherwise. The value is
    computed for every neighbour ``v`` of ``a`` and the spread must stay
    below ``1e-9``.
    """
    a = _check_walk_graph(g, a)
    try:
        check_equitable(g, distance_partition(g, a))
    except NotEquitableError as exc:
        raise HypothesisError("equitable", f"distance partition at {a} is not equitable "
                              f"(vertex {exc.vertex}, cell {exc.cell}); the closed form does not apply") from None
    if not is_two_connected(g):
        raise HypothesisError("2-connected", "graph has a cut vertex")
    k, n = g.k, g.n
    decomp, labels = deleted_decomposition(g, a, group_tol)
    for e in decomp:
        if abs(e.value) >= k:
            raise ArithmeticError(f"eigenvalue {e.value} of X minus a is not inside (-k, k)")
    lam = decomp.eigenvalues
    nbr_idx = np.searchsorted(labels, g.neighbors[a])
    # rows: eigenvalues, columns: neighbours v
    ev = np.array([(e.projection.sum(axis=1))[nbr_idx] for e in decomp])
    w1 = (k**3 / ((k - lam) * (k + lam) ** 2))[:, None]
    w2 = (k / (k + lam))[:, None]
    s1_all = (w1 * ev**2).sum(axis=0) / n
    s2_all = (1 - (w2 * ev).sum(axis=0)) ** 2 / n
    totals = s1_all + s2_all
    spread = float(totals.max() - totals.min())
    if spread > 1e-9:
        raise HypothesisError("v-independence", f"result depends on the neighbour v (spread {spread:.3e})")
    rows = tuple(
        Contribution(float(lam[r]), decomp[r].multiplicity, float(ev[r, 0]),
                     float(w1[r, 0] * ev[r, 0] ** 2 / n), float(w2[r, 0] * ev[r, 0]))
        for r in range(len(lam))
    )
    s1, s2 = float(s1_all[0]), float(s2_all[0])
    return AvgSearchReport(g.name, n, k, a, int(g.neighbors[a][0]), rows, s1, s2, s1 + s2,
                           "closed-form", spread)


def spectral_average_from_x0(g: Graph, a: int) -> np.ndarray:
    """Limit of the Cesaro-averaged arc distribution, from the clone spectrum.

    Sums ``|F_theta x0|^2`` over the conjugate pairs for every interior
    eigenvalue of the clone matrix; the remaining mass lies in the ``-1``
    eigenspace of ``W`` because a 2-connected graph has ``F_1 x0 = 0``.
    """
    a = _check_walk_graph(g, a)
    if not is_two_connected(g):
        raise HypothesisError("2-connected", "graph has a cut vertex; F_1 x0 need not vanish")
    k, n = g.k, g.n
    x0 = np.full(n * k, 1 / np.sqrt(n * k), dtype=complex)
    aug = build_augmented(g, a)
    decomp = herm_eig(aug.matrix)
    dist = np.zeros(n * k)
    rest = x0.copy()
    for e in decomp:
        if abs(e.value) >= k * (1 - 1e-10):
            continue
        y = apply_F(g, a, e.value, e.projection, x0)
        # x0 is real, so F_{-theta} x0 = conj(F_theta x0)
        dist += 2 * np.abs(y) ** 2
        rest -= y + y.conj()
    dist += np.abs(rest) ** 2
    return dist
