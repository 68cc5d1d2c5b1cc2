"""Acceptance criteria, one test per criterion.

Each criterion prints a single ``PASS``/``FAIL`` line. Under pytest the lines
are collected and shown in the terminal summary; ``python
tests/test_acceptance.py`` prints them directly.
"""

import contextlib
import io
import math
import time

import numpy as np
import pytest

from dtqw.cli import main as cli_main
from dtqw.drg import (
    bound_evE1,
    bound_lambda,
    check_interlacing,
    dual_polys,
    family_sweep,
    laplacian_minor_check,
    laplacian_minor_solution,
    orthopoly,
    quotient_B,
    s1_lower_bound,
)
from dtqw.graphs import build_family, intersection_array_of, vertex_deleted
from dtqw.spectral import build_augmented, closed_form_average, herm_eig, reconstruct_F, unitary_eig
from dtqw.walk import empirical_average_search_probability, walk_matrix, walk_operators

TEST_DRGS = [
    ("complete", 3), ("complete", 4), ("complete", 5), ("complete", 8),
    ("cycle", 5), ("cycle", 6), ("cycle", 9),
    ("petersen",), ("hamming", 2, 3), ("hamming", 2, 4), ("hamming", 3, 2), ("hamming", 3, 3),
    ("hypercube", 4), ("johnson", 5, 2), ("johnson", 6, 2), ("johnson", 7, 3),
    ("paley", 5), ("paley", 13), ("paley", 17),
]

RESULTS: list[str] = []


def _report(name, ok, detail, elapsed, limit=None):
    timing = f"{elapsed:.1f}s" + (f" (limit {limit:g}s)" if limit else "")
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail} [{timing}]"
    RESULTS.append(line)
    print(line)
    return ok


def _timed(fn):
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


# ------------------------------------------------------------------ criteria


def k3_exactness():
    g = build_family("complete", 3)
    rep = closed_form_average(g, 0)
    emp = empirical_average_search_probability(walk_operators(g, 0), 1_000_000)
    errs = (abs(rep.total - 1 / 3), abs(rep.s1 - 8 / 27), abs(rep.s2 - 1 / 27))
    ok = max(errs) < 1e-12 and abs(emp - 1 / 3) < 2e-3
    return ok, f"total={rep.total:.15f} closed-form err={max(errs):.1e} empirical err={abs(emp - 1 / 3):.1e}"


def complete_graph_limit():
    ns = [4, 8, 16, 32, 64, 128, 256]
    res = family_sweep("complete", ns)
    worst = max(abs(r.total - ((n - 1) ** 3 + (n - 2) ** 2) / (n * (2 * n - 3) ** 2)) for n, r in zip(ns, res.rows))
    last = res.rows[-1].deviation
    ok = worst < 1e-10 and res.monotone and last < 2e-3
    return ok, f"max formula err={worst:.1e} strictly decreasing={res.monotone} |total-1/4| at n=256 is {last:.3e}"


def oracle_equivalence():
    specs = [("complete", 3), ("complete", 5), ("cycle", 6), ("petersen",), ("hamming", 2, 3), ("johnson", 5, 2)]
    diffs = {}
    for spec in specs:
        g = build_family(*spec)
        closed = closed_form_average(g, 0).total
        emp = empirical_average_search_probability(walk_operators(g, 0), 200_000)
        diffs[g.name] = abs(closed - emp)
    worst = max(diffs, key=diffs.get)
    return all(d < 5e-3 for d in diffs.values()), f"max |closed-empirical|={diffs[worst]:.2e} ({worst})"


def spectral_correspondence():
    """Phases refer to ``W = -U``; the oracle sign makes ``U`` itself carry ``-e^{i theta}``."""
    worst_match = worst_F = 0.0
    ok = True
    for spec in [("complete", 3), ("cycle", 6), ("petersen",)]:
        g = build_family(*spec)
        k = g.k
        W = -walk_matrix(walk_operators(g, 0))
        dec = herm_eig(build_augmented(g, 0).matrix)
        vals = dec.eigenvalues
        phases = unitary_eig(W)
        for theta, _, _ in phases:
            if abs(np.sin(theta)) > 1e-9:
                worst_match = max(worst_match, float(np.min(np.abs(vals - k * np.cos(theta)))))
        Fs = []
        for e in dec:
            if abs(e.value) >= k * (1 - 1e-10):
                continue
            th = math.acos(e.value / k)
            for sign in (1, -1):
                worst_match = max(worst_match, min(abs(t - sign * th) for t, _, _ in phases))
                F = reconstruct_F(g, 0, e.value, e.projection, conjugate=sign < 0)
                worst_F = max(worst_F,
                              float(np.max(np.abs(W @ F - np.exp(1j * sign * th) * F))),
                              float(np.max(np.abs(F @ F - F))),
                              float(np.max(np.abs(F - F.conj().T))))
                Fs.append(F)
        for i, F in enumerate(Fs):
            for G in Fs[i + 1:]:
                worst_F = max(worst_F, float(np.max(np.abs(F @ G))))
    ok = worst_match < 1e-7 and worst_F < 1e-8
    return ok, f"max phase mismatch={worst_match:.1e} max F residual={worst_F:.1e} (walk taken as -U)"


def augmented_power_identity():
    worst = 0.0
    for spec in TEST_DRGS:
        g = build_family(*spec)
        aug = build_augmented(g, 0)
        A = vertex_deleted(g, 0)[0].adjacency.astype(float)
        lhs = aug.ones_vector()
        rhs = np.ones(A.shape[0])
        for m in range(7):
            if m:
                lhs = aug.matrix @ lhs
                rhs = A @ rhs
            err = max(np.max(np.abs(lhs[: aug.clones])), np.max(np.abs(lhs[aug.clones:] - rhs)))
            worst = max(worst, float(err) / g.k**m)
    return worst < 1e-8, f"max err/k^m={worst:.1e} over {len(TEST_DRGS)} graphs, m<=6"


def bounds_suite():
    min_slack = math.inf
    lap_dev = 0.0
    increasing = True
    s1_ok = True
    for spec in TEST_DRGS:
        g = build_family(*spec)
        arr = intersection_array_of(g)
        for res in (bound_lambda(arr, g), bound_evE1(arr, g)):
            min_slack = min(min_slack, res.slack)
        s1 = s1_lower_bound(g)
        s1_ok &= s1.actual > s1.bound
        min_slack = min(min_slack, s1.slack)
        z = laplacian_minor_solution(arr)
        increasing &= all(x < y for x, y in zip(z, z[1:]))
        lap_dev = max(lap_dev, laplacian_minor_check(arr, g))
    ok = min_slack >= -1e-9 and s1_ok and increasing and lap_dev < 1e-8
    return ok, f"min slack={min_slack:.3e} s1 strict={s1_ok} laplacian dev={lap_dev:.1e} increasing={increasing}"


def polynomial_identities():
    exact = interlace = True
    count = 0
    for spec in TEST_DRGS + [("cycle", 12), ("hypercube", 6), ("johnson", 8, 3), ("paley", 41)]:
        arr = intersection_array_of(build_family(*spec))
        q = dual_polys(arr)
        value = q(arr.d - 1, arr.k)
        exact &= isinstance(value, int) and value == math.prod(arr.c[1:])
        interlace &= check_interlacing(q) and check_interlacing(orthopoly(quotient_B(arr)))
        count += 1
    return exact and interlace, f"q_(d-1)(k)=c2..cd exact={exact} interlacing={interlace} on {count} arrays"


def limit_trends():
    paley = family_sweep("paley", [5, 13, 17, 29, 37, 41])
    ham = family_sweep("hamming", [(2, q) for q in range(3, 8)])
    ok = True
    parts = []
    for name, res in (("paley", paley), ("hamming(2,q)", ham)):
        d = [r.deviation for r in res.rows]
        ok &= d[-1] < d[0] and d[-1] < 0.05
        parts.append(f"{name} {d[0]:.4f}->{d[-1]:.4f}")
    return ok, "; ".join(parts)


def cli_determinism(tmp_dir):
    commands = [
        ["average", "--family", "petersen", "--T", "20000"],
        ["spectrum", "--family", "petersen"],
        ["sweep", "--family", "hamming:2", "--params", "3,4,5", "--svg", "--out", "{out}/sweep.csv"],
        ["bounds", "--family", "petersen"],
        ["bounds", "--array", "2,1,1;1,1,2"],
        ["check-dr", "--family", "cycle", "--param", "6"],
    ]
    same = True
    for argv in commands:
        outputs = []
        for rep in range(2):
            out_dir = tmp_dir / f"run{rep}"
            out_dir.mkdir(exist_ok=True)
            args = [a.replace("{out}", str(out_dir)) for a in argv]
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                code = cli_main(args)
            files = sorted((p.name, p.read_bytes()) for p in out_dir.iterdir())
            outputs.append((code, buf.getvalue().encode(), files))
        same &= outputs[0] == outputs[1] and outputs[0][0] == 0
    return same, f"{len(commands)} commands byte-identical across two runs"


CRITERIA = [
    ("K3 exactness", k3_exactness, 10),
    ("complete-graph limit", complete_graph_limit, 30),
    ("oracle equivalence", oracle_equivalence, 120),
    ("spectral correspondence", spectral_correspondence, None),
    ("augmented-power identity", augmented_power_identity, None),
    ("bounds suite", bounds_suite, None),
    ("polynomial identities", polynomial_identities, None),
    ("limit trends", limit_trends, 300),
    ("determinism", None, None),
]


def _run(name, fn, limit):
    ok, detail, elapsed = _timed(fn)
    ok = ok and (limit is None or elapsed < limit)
    return _report(name, ok, detail, elapsed, limit)


@pytest.mark.parametrize("name, fn, limit", CRITERIA[:-1], ids=[c[0] for c in CRITERIA[:-1]])
def test_criterion(name, fn, limit):
    assert _run(name, fn, limit)


def test_determinism(tmp_path):
    assert _run("determinism", lambda: cli_determinism(tmp_path), None)


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    results = []
    for name, fn, limit in CRITERIA[:-1]:
        results.append(_run(name, fn, limit))
    with tempfile.TemporaryDirectory() as tmp:
        results.append(_run("determinism", lambda: cli_determinism(Path(tmp)), None))
    sys.exit(0 if all(results) else 1)
