import numpy as np
import pytest

from dtqw.errors import GraphError, HypothesisError
from dtqw.graphs import build_complete, build_cycle, build_petersen, from_edges
from dtqw.spectral import closed_form_average
from dtqw.walk import (
    apply_C,
    apply_O,
    apply_R,
    apply_U,
    arc_space,
    empirical_average_search_probability,
    evolve,
    initial_state,
    search_probability_at,
    simulate,
    time_average_distribution,
    walk_matrix,
    walk_operators,
)

from conftest import make
from oracles import brute_walk_matrix

SMALL = [("complete", 3), ("complete", 4), ("cycle", 6), ("petersen",), ("hamming", 2, 3)]


@pytest.fixture(params=SMALL, ids=lambda s: "-".join(map(str, s)))
def ops(request):
    return walk_operators(make(request.param), 0)


def test_arc_layout():
    arcs = arc_space(build_complete(3))
    assert arcs.arcs() == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    assert arcs.heads.tolist() == [1, 2, 0, 2, 0, 1]
    assert arcs.rev.tolist() == [2, 4, 0, 5, 1, 3]
    assert arcs.index(2, 1) == 5


def test_rev_is_fixed_point_free_involution(ops):
    rev = ops.arcs.rev
    assert np.array_equal(rev[rev], np.arange(ops.arcs.size))
    assert np.all(rev != np.arange(ops.arcs.size))


def test_walk_requires_valency_and_connectivity():
    with pytest.raises(HypothesisError):
        arc_space(from_edges(4, [(0, 1), (2, 3)]))
    two_triangles = from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    with pytest.raises(HypothesisError):
        walk_operators(two_triangles, 0)
    with pytest.raises(GraphError):
        walk_operators(build_complete(3), 3)


@pytest.mark.parametrize("spec, size", [(("complete", 3), 6), (("petersen",), 30), (("cycle", 6), 12)])
def test_initial_state(spec, size):
    x0 = initial_state(arc_space(make(spec)))
    assert x0.shape == (size,)
    assert np.allclose(x0, 1 / np.sqrt(size))
    assert np.isclose(np.linalg.norm(x0), 1.0)


def test_apply_R_on_indicator(ops):
    arcs = ops.arcs
    for u, v in arcs.arcs()[:5]:
        e = np.zeros(arcs.size)
        e[arcs.index(u, v)] = 1
        assert np.flatnonzero(apply_R(ops, e)).tolist() == [arcs.index(v, u)]


def test_coin_fixes_block_constant_states(ops, rng):
    s = np.repeat(rng.normal(size=ops.n), ops.k)
    assert np.allclose(apply_C(ops, s), s)


def test_oracle_on_k3():
    ops = walk_operators(build_complete(3), 0)
    out = apply_O(ops, initial_state(ops.arcs))
    assert np.allclose(out * np.sqrt(6), [1, 1, -1, -1, -1, -1])


def test_operators_are_involutions(ops, rng):
    s = rng.normal(size=ops.arcs.size) + 1j * rng.normal(size=ops.arcs.size)
    for f in (apply_R, apply_C, apply_O):
        assert np.allclose(f(ops, f(ops, s)), s, atol=1e-12)


def test_length_mismatch_raises(ops):
    with pytest.raises(ValueError):
        apply_U(ops, np.ones(ops.arcs.size + 1))


def test_unitarity_on_random_states(ops, rng):
    for _ in range(1000):
        s = rng.normal(size=ops.arcs.size) + 1j * rng.normal(size=ops.arcs.size)
        assert abs(np.linalg.norm(apply_U(ops, s)) - np.linalg.norm(s)) < 1e-12 * np.linalg.norm(s)


def test_walk_matrix_matches_brute_force(ops):
    U = walk_matrix(ops)
    assert np.isrealobj(U)
    assert np.allclose(U, brute_walk_matrix(ops.graph.adjacency, 0))
    assert np.allclose(U @ U.T, np.eye(ops.arcs.size), atol=1e-12)


def test_matrix_free_matches_walk_matrix(ops, rng):
    U = walk_matrix(ops)
    s = rng.normal(size=ops.arcs.size) + 1j * rng.normal(size=ops.arcs.size)
    assert np.allclose(apply_U(ops, s), U @ s, atol=1e-12)


def test_walk_matrix_refuses_large():
    with pytest.raises(GraphError):
        walk_matrix(walk_operators(build_complete(10), 0))


def test_compiled_and_numpy_backends_agree(ops):
    a = simulate(ops, 500)
    b = simulate(ops, 500, backend="numpy")
    for x, y in zip(a, b):
        assert np.allclose(x, y, atol=1e-11)


def test_simulate_matches_matrix_powers(ops):
    U = walk_matrix(ops)
    x = initial_state(ops.arcs)
    for t in range(6):
        assert np.allclose(evolve(ops, t), x, atol=1e-12)
        x = U @ x


def test_search_probability_at_zero():
    assert search_probability_at(walk_operators(build_complete(3), 0), 0) == pytest.approx(1 / 3, abs=1e-15)
    assert search_probability_at(walk_operators(build_cycle(6), 0), 0) == pytest.approx(1 / 6, abs=1e-15)


def test_search_probability_is_deterministic():
    ops = walk_operators(build_complete(3), 0)
    p = search_probability_at(ops, 1)
    assert 0 <= p <= 1
    assert search_probability_at(ops, 1) == p
    with pytest.raises(ValueError):
        search_probability_at(ops, -1)


def test_time_average_basics():
    ops = walk_operators(build_complete(3), 0)
    assert np.allclose(time_average_distribution(ops, 1), 1 / 6)
    assert empirical_average_search_probability(ops, 1) == pytest.approx(1 / 3)
    assert time_average_distribution(ops, 100_000).sum() == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValueError):
        time_average_distribution(ops, 0)


def test_k3_time_average_limit():
    ops = walk_operators(build_complete(3), 0)
    assert abs(empirical_average_search_probability(ops, 1_000_000) - 1 / 3) < 2e-3


@pytest.mark.slow
def test_petersen_time_average_matches_closed_form():
    g = build_petersen()
    emp = empirical_average_search_probability(walk_operators(g, 0), 200_000)
    assert abs(emp - closed_form_average(g, 0).total) < 5e-3


def _cesaro_envelope(probs, T):
    """max |avg(2t) - avg(t)| for t in [T, 2T), from one trajectory."""
    avg = np.cumsum(probs) / np.arange(1, len(probs) + 1)
    t = np.arange(T, 2 * T)
    return float(np.max(np.abs(avg[2 * t - 1] - avg[t - 1])))


@pytest.mark.parametrize("spec", [("complete", 5), ("petersen",), ("cycle", 6), ("hamming", 2, 3)])
def test_cesaro_error_decreases(spec):
    g = make(spec)
    ops = walk_operators(g, 0)
    _, probs, _ = simulate(ops, 400_000)
    env = [_cesaro_envelope(probs, T) for T in (1_000, 10_000, 100_000)]
    floor = 1e-10  # below this the differences are round-off
    for prev, nxt in zip(env, env[1:]):
        assert nxt <= max(1.1 * prev, floor)
    limit = closed_form_average(g, 0).total
    assert abs(probs[:200_000].mean() - limit) < 5e-3
