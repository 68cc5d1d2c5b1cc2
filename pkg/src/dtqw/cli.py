"""``dtqw`` command line.

Exit codes: 0 success, 1 bad input, 2 tolerance breach under ``--check``,
3 failed theorem hypothesis, 4 ``check-dr`` refusal.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import drg
from .errors import (
    BoundViolationError,
    DtqwError,
    GraphError,
    HypothesisError,
    InvalidArrayError,
    NotDistanceRegularError,
    ParseError,
)
from .graphs import (
    Graph,
    build_family,
    intersection_array_of,
    is_connected,
    parse_array,
    read_edge_list,
)
from .report import line_chart_svg, write_csv
from .spectral import build_augmented, closed_form_average, deleted_decomposition, herm_eig, walk_eigenphases
from .walk import empirical_average_search_probability, walk_operators

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_HYPOTHESIS, EXIT_REFUSAL = 0, 1, 2, 3, 4
DEFAULT_T = 200_000
DEFAULT_TOL = 5e-3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    params: list[tuple[int, ...]] = field(default_factory=list)
    edges: str | None = None
    array: str | None = None
    vertex: int = 0
    T: int = DEFAULT_T
    tol: float = DEFAULT_TOL
    out: str | None = None
    svg: bool = False
    check: bool = False

    def __post_init__(self):
        sources = sum(x is not None for x in (self.family, self.edges, self.array))
        if sources != 1:
            raise UsageError("give exactly one of --family, --edges, --array")
        if self.T < 1:
            raise UsageError("--T must be >= 1")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")


def _parse_param(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(":") if x != "")
    except ValueError:
        raise UsageError(f"bad parameter {text!r}; use integers, ':' between parts") from None


def _family_name(spec: str) -> tuple[str, tuple[int, ...]]:
    """``"hamming:2"`` -> ``("hamming", (2,))``; the prefix is prepended to every param."""
    name, _, rest = spec.partition(":")
    return name, _parse_param(rest) if rest else ()


def config_from_args(args) -> RunConfig:
    params: list[tuple[int, ...]] = []
    if args.param is not None:
        params.append(_parse_param(args.param))
    if args.params is not None:
        params.extend(_parse_param(p) for p in args.params.split(",") if p.strip())
        if not params:
            raise UsageError("--params is empty")
    return RunConfig(
        command=args.command, family=args.family, params=params, edges=args.edges, array=args.array,
        vertex=args.vertex, T=args.T, tol=args.tol, out=args.out, svg=args.svg, check=args.check,
    )


def _graph(cfg: RunConfig) -> Graph:
    if cfg.edges is not None:
        try:
            return read_edge_list(cfg.edges)
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.edges}: {exc.strerror}") from None
    if cfg.family is None:
        raise UsageError("this command needs a graph (--family or --edges)")
    name, prefix = _family_name(cfg.family)
    if len(cfg.params) > 1:
        raise UsageError("give a single --param for this command")
    params = prefix + (cfg.params[0] if cfg.params else ())
    return build_family(name, *params)


def _require_walk_graph(g: Graph, a: int) -> None:
    g.check_vertex(a)
    if not g.is_regular:
        raise HypothesisError("regular", f"{g.name or 'graph'} is not regular")
    if g.k < 2:
        raise HypothesisError("valency", "need k >= 2")
    if not is_connected(g):
        raise HypothesisError("connected", "graph is disconnected")


# ---------------------------------------------------------------- commands


def cmd_average(cfg: RunConfig) -> tuple[str, int]:
    g = _graph(cfg)
    _require_walk_graph(g, cfg.vertex)
    rep = closed_form_average(g, cfg.vertex)
    emp = empirical_average_search_probability(walk_operators(g, cfg.vertex), cfg.T)
    diff = abs(rep.total - emp)
    rows = [["eigenvalue", "", r.value, r.multiplicity, r.evE1, r.s1_term, r.s2_weight, None] for r in rep.rows]
    rows += [
        ["summary", "s1", None, None, None, None, None, rep.s1],
        ["summary", "s2", None, None, None, None, None, rep.s2],
        ["summary", "total", None, None, None, None, None, rep.total],
        ["summary", "T", None, None, None, None, None, cfg.T],
        ["summary", "empirical", None, None, None, None, None, emp],
        ["summary", "abs_diff", None, None, None, None, None, diff],
    ]
    text = write_csv(
        "average-v1",
        ["kind", "name", "lambda", "multiplicity", "evE1", "s1_term", "s2_weight", "value"],
        rows,
        comments=[("graph", g.name or "graph"), ("n", g.n), ("k", g.k), ("vertex", cfg.vertex),
                  ("witness", rep.witness)],
    )
    code = EXIT_CHECK if cfg.check and diff > cfg.tol else EXIT_OK
    return text, code


def _snap(x: float) -> float:
    # round-off around zero would otherwise print as e.g. -1.2e-17
    return 0.0 if abs(x) < 1e-12 else float(x)


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    g = _graph(cfg)
    _require_walk_graph(g, cfg.vertex)
    aug = build_augmented(g, cfg.vertex)
    phases = walk_eigenphases(g, cfg.vertex, herm_eig(aug.matrix))
    deleted, _ = deleted_decomposition(g, cfg.vertex)
    rows = []
    matched_main = set()
    for ph in phases:
        hit = deleted.find(ph.value, tol=1e-8)
        main = bool(hit is not None and np.linalg.norm(hit.projection.sum(axis=1)) > 1e-6)
        if main:
            matched_main.add(hit.value)
        rows.append([_snap(ph.value), ph.multiplicity, ph.theta, _snap(g.k * np.cos(ph.theta)), ph.boundary,
                     None if hit is None else _snap(hit.value), main])
    main_values = [e.value for e in deleted if np.linalg.norm(e.projection.sum(axis=1)) > 1e-6]
    unmatched = [v for v in main_values if v not in matched_main]
    text = write_csv(
        "spectrum-v1",
        ["lambda", "multiplicity", "theta", "k_cos_theta", "boundary", "matched_lambda", "main"],
        rows,
        comments=[("graph", g.name or "graph"), ("n", g.n), ("k", g.k), ("vertex", cfg.vertex),
                  ("phase_convention", "theta is a phase of -U = R(2/k NN* - I)")],
        trailer=[("main_eigenvalues", len(main_values)), ("unmatched_main", len(unmatched))],
    )
    code = EXIT_CHECK if cfg.check and unmatched else EXIT_OK
    return text, code


def cmd_sweep(cfg: RunConfig) -> tuple[str, int, str | None]:
    if cfg.family is None:
        raise UsageError("sweep needs --family")
    if not cfg.params:
        raise UsageError("sweep needs a non-empty --params list")
    name, prefix = _family_name(cfg.family)
    result = drg.family_sweep(name, [prefix + p for p in cfg.params])
    rows = [[":".join(map(str, r.param)), r.n, r.k, r.total, r.deviation, r.criterion,
             r.criterion_simple, r.status] for r in result.rows]
    text = write_csv(
        "sweep-v1",
        ["param", "n", "k", "total", "abs_dev", "criterion", "criterion_simple", "status"],
        rows,
        comments=[("family", cfg.family)],
        trailer=[("monotone", result.monotone), ("overall_decreasing", result.overall_decreasing)],
    )
    svg = None
    if cfg.svg:
        ok = [r for r in result.rows if r.deviation is not None]
        svg = line_chart_svg([r.k for r in ok], [r.deviation for r in ok],
                             f"{cfg.family}: |average search probability - 1/4|", "valency k",
                             "|total - 1/4|")
    code = EXIT_CHECK if cfg.check and not result.overall_decreasing else EXIT_OK
    return text, code, svg


def cmd_bounds(cfg: RunConfig) -> tuple[str, int]:
    g = None
    if cfg.array is not None:
        arr = parse_array(cfg.array)
    else:
        g = _graph(cfg)
        _require_walk_graph(g, cfg.vertex)
        try:
            arr = intersection_array_of(g)
        except NotDistanceRegularError as exc:
            raise HypothesisError("distance-regular", str(exc)) from None
    a = cfg.vertex
    results = [drg.bound_lambda(arr, g, a), drg.bound_evE1(arr, g, a)]
    if g is not None:
        results.append(drg.s1_lower_bound(g, a))
    rows = [[r.name, r.bound, r.actual, r.slack] for r in results]
    z = drg.laplacian_minor_solution(arr)
    dev = drg.laplacian_minor_check(arr, g, a) if g is not None else None
    for i, zi in enumerate(z, start=1):
        rows.append([f"laplacian_z{i}", float(zi), None, None])
    if dev is not None:
        rows.append(["laplacian_solve_dev", 0.0, dev, -dev])
    if len(z) > 1:
        rows.append(["laplacian_min_increment", float(min(b - a_ for a_, b in zip(z, z[1:]))), None, None])
    c1, c2 = drg.limit_criterion(arr)
    rows.append(["criterion", c1, None, None])
    rows.append(["criterion_simple", c2, None, None])
    if arr.d == 2:
        rows.append(["srg_candidate_main_sum", drg.srg_candidate_main_sum(arr),
                     drg.main_sum(g, a) if g is not None else None, None])
    slacks = [r[3] for r in rows if r[3] is not None]
    text = write_csv(
        "bounds-v1",
        ["bound", "value", "actual", "slack"],
        rows,
        comments=[("array", str(arr)), ("n", arr.n), ("k", arr.k), ("d", arr.d)]
        + ([("graph", g.name or "graph"), ("vertex", a)] if g is not None else []),
    )
    code = EXIT_CHECK if cfg.check and any(s < -drg.SLACK_TOL for s in slacks) else EXIT_OK
    return text, code


def cmd_check_dr(cfg: RunConfig) -> tuple[str, int]:
    g = _graph(cfg)
    try:
        arr = intersection_array_of(g)
    except (NotDistanceRegularError, GraphError) as exc:
        return f"not distance regular: {exc}\n", EXIT_REFUSAL
    return f"{arr}\n", EXIT_OK


COMMANDS = {
    "average": cmd_average,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "check-dr": cmd_check_dr,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--family", help="family name, optionally with fixed leading parameters (hamming:2)")
    src.add_argument("--param", help="one parameter; tuple parts separated by ':' (e.g. 2:3)")
    src.add_argument("--params", help="comma-separated parameter list for sweeps")
    src.add_argument("--edges", help="edge-list file")
    src.add_argument("--array", help="intersection array 'b0,..;c1,..'")
    common.add_argument("--vertex", type=int, default=0, help="marked vertex (default 0)")
    common.add_argument("--T", type=int, default=DEFAULT_T, help="simulation length")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="tolerance for --check")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--svg", action="store_true", help="also write an SVG chart next to --out")
    common.add_argument("--check", action="store_true", help="exit 2 when a check fails")
    parser = _Parser(prog="dtqw", description="Average search probability of oracle quantum walks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors (exit 1) and --help (exit 0)
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        if cfg.svg and cfg.out is None:
            raise UsageError("--svg needs --out")
        result = COMMANDS[cfg.command](cfg)
    except (UsageError, ParseError, InvalidArrayError) as exc:
        print(f"dtqw: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HypothesisError, NotDistanceRegularError) as exc:
        print(f"dtqw: hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except BoundViolationError as exc:
        print(f"dtqw: bound violated: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (GraphError, DtqwError) as exc:
        print(f"dtqw: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text, code = result[0], result[1]
    _emit(text, cfg.out)
    if len(result) > 2 and result[2] is not None:
        Path(cfg.out).with_suffix(".svg").write_text(result[2])
    return code


if __name__ == "__main__":
    sys.exit(main())
