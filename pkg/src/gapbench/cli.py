"""
Command-line front end.

Subcommands: generate, pagerank, gap, scan, adversary, report. Tabular
results go to ``--output`` (stdout by default) as CSV, or JSON with
``--format json``; human-readable summaries go to stderr. Every output
starts with a provenance header carrying the tool version, the full
validated configuration and the seed.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__, _runtime
from .errors import ConvergenceError, DenseThresholdError, GapbenchError
from .experiments import (
    EXHAUSTIVE_MAX_N,
    SolverConfig,
    adversarial_search,
    relabel_signature,
    runtime_report,
    RuntimeModel,
    uniform_scaling,
    worst_case_columns,
    worst_case_scaling,
    www_scaling,
)
from .google import DANGLING_POLICIES, GoogleOperator
from .graph import (
    DirectedGraph,
    ScaleFreeParams,
    dump_edge_list,
    read_edge_list,
    scale_free_graph,
    uniform_random_graph,
    worst_case_graph,
)
from .pagerank import iteration_bound, power_method
from .spectra import METHODS, min_gap
from .svgplot import Chart

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

FAMILIES = ("worst-case", "scale-free", "uniform")

# fixed CSV schemas; append-only
SCHEMAS = {
    "pagerank": ["vertex", "score"],
    "gap": ["s", "gap"],
    "scan": ["alpha", "n", "delta", "delta_inverse", "seed"],
    "adversary": ["candidate", "columns", "delta", "is_min"],
    "report": ["quantity", "value"],
}

# rows within this of the minimum delta are marked in adversary output
_TIE_TOL = 1e-10


class UsageError(GapbenchError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--alpha", type=float, default=0.85, help="damping factor in [0, 1)")
    g.add_argument("--epsilon", type=float, default=1e-8, help="PageRank / runtime-bound tolerance")
    g.add_argument("--seed", type=int, default=0, help="seed for generators and solver start vectors")
    g.add_argument("--threads", type=int, default=1, help="worker thread cap")
    g.add_argument("--deterministic", action="store_true", help="seed every randomized solver start from --seed")
    g.add_argument("-o", "--output", default="-", help="output file ('-' for stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--plot", default=None, metavar="PATH.svg", help="also write an SVG chart")
    g.add_argument("--config", default=None, help="key = value file supplying option defaults")
    g.add_argument("--dangling", choices=DANGLING_POLICIES, default="uniform", help="dangling-row policy")
    g.add_argument("--method", choices=METHODS, default="auto", help="eigensolver")
    g.add_argument("--coarse-points", type=int, default=33)
    g.add_argument("--refine-tol", type=float, default=1e-6)
    g.add_argument("--tol", type=float, default=1e-9, help="eigen-residual tolerance for the iterative solver")
    return p


def _graph_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("graph source")
    g.add_argument("--graph", default=None, help="edge-list file")
    g.add_argument("--family", choices=FAMILIES, default="worst-case", help="generator used when --graph is absent")
    g.add_argument("--n", type=int, default=16, help="vertex count")
    g.add_argument("--m", type=int, default=None, help="edge count for the uniform family (default 4n)")
    g.add_argument("--p-new-source", type=float, default=ScaleFreeParams.p_new_source)
    g.add_argument("--p-existing", type=float, default=ScaleFreeParams.p_existing)
    g.add_argument("--p-new-target", type=float, default=ScaleFreeParams.p_new_target)
    g.add_argument("--delta-in", type=float, default=ScaleFreeParams.delta_in)
    g.add_argument("--delta-out", type=float, default=ScaleFreeParams.delta_out)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="gapbench", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"gapbench {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = sub.add_parser("generate", parents=[common, _graph_parser()], help="write a generated graph as an edge list")
    gen.add_argument("kind", choices=FAMILIES)
    gen.set_defaults(handler=cmd_generate)

    pr = sub.add_parser("pagerank", parents=[common, _graph_parser()], help="power-method PageRank")
    pr.add_argument("--max-iter", type=int, default=100_000)
    pr.set_defaults(handler=cmd_pagerank)

    gp = sub.add_parser("gap", parents=[common, _graph_parser()], help="gap curve and minimum gap of H(s)")
    gp.set_defaults(handler=cmd_gap)

    sc = sub.add_parser("scan", parents=[common, _graph_parser()], help="minimum-gap scaling over n")
    sc.add_argument("--ns", type=_int_list, default=None, help="comma-separated sizes")
    sc.add_argument("--alphas", type=_float_list, default=None, help="damping factors (worst-case family)")
    sc.add_argument("--seeds", type=int, default=5, help="graphs per size for random families")
    sc.add_argument("--edges-per-vertex", type=float, default=4.0, help="uniform family density")
    sc.set_defaults(handler=cmd_scan)

    ad = sub.add_parser("adversary", parents=[common], help="search deterministic P for the smallest gap")
    ad.add_argument("--n", type=int, required=False, default=None)
    mode = ad.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", dest="strategy", action="store_const", const="exhaustive")
    mode.add_argument("--hill-climb", dest="strategy", action="store_const", const="hill-climb")
    ad.add_argument("--budget", type=int, default=None)
    ad.add_argument("--restarts", type=int, default=0)
    ad.add_argument("--best-out", default=None, help="write the best P as an edge list")
    ad.set_defaults(handler=cmd_adversary, strategy="exhaustive")

    rp = sub.add_parser("report", parents=[common, _graph_parser()], help="classical vs adiabatic runtime bounds")
    rp.add_argument("--delta", type=float, default=None, help="measured minimum gap (computed when absent)")
    rp.add_argument("--a-exponent", type=float, default=1.0)
    rp.add_argument("--b-exponent", type=float, default=1.0)
    rp.set_defaults(handler=cmd_report)
    parser.set_defaults(subparsers=sub.choices)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (t.strip() for t in line.split(sep, 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = _read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        sub = args.subparsers[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults: dict[str, Any] = {}
        for key, value in cfg.items():
            action = known.get(key)
            if action is None or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r} for '{args.command}'")
            if action.nargs == 0 and isinstance(action.const, bool):
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                defaults[key] = value  # argparse converts string defaults with the option's type
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _config_dict(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "subparsers")}


def _provenance(args: argparse.Namespace) -> list[str]:
    return [
        f"gapbench {__version__}",
        f"command: {args.command}",
        "config: " + json.dumps(_config_dict(args), sort_keys=True, separators=(",", ":")),
        f"seed: {args.seed}",
    ]


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def _open_output(args: argparse.Namespace):
    if args.output in (None, "-"):
        return sys.stdout, False
    return open(args.output, "w", newline=""), True


def _emit(args: argparse.Namespace, rows: list[Sequence[Any]], summary: dict[str, Any]) -> None:
    columns = SCHEMAS[args.command]
    fh, close = _open_output(args)
    try:
        if args.format == "json":
            doc = {
                "provenance": {"tool": f"gapbench {__version__}", "config": _config_dict(args), "seed": args.seed},
                "columns": columns,
                "rows": [list(r) for r in rows],
                "summary": summary,
            }
            fh.write(json.dumps(doc, indent=2, sort_keys=False, default=_json_default) + "\n")
        else:
            buf = io.StringIO()
            for line in _provenance(args):
                buf.write(f"# {line}\n")
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(columns)
            for r in rows:
                w.writerow([_cell(v) for v in r])
            fh.write(buf.getvalue())
    finally:
        if close:
            fh.close()
    for k, v in summary.items():
        print(f"{k}: {_cell(v)}", file=sys.stderr)


def _json_default(o: Any) -> Any:
    if hasattr(o, "tolist"):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _solver(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(
        method=args.method,
        coarse_points=args.coarse_points,
        refine_tol=args.refine_tol,
        tol=args.tol,
        seed=args.seed if args.deterministic else None,
        policy=args.dangling,
    )


def _scale_free_params(args: argparse.Namespace) -> ScaleFreeParams:
    params = ScaleFreeParams(args.p_new_source, args.p_existing, args.p_new_target, args.delta_in, args.delta_out)
    params.validate()
    return params


def _generate(args: argparse.Namespace, family: str) -> DirectedGraph:
    n = args.n
    if n is None:
        raise UsageError("--n is required")
    if family == "worst-case":
        return worst_case_graph(n)
    if family == "scale-free":
        return scale_free_graph(n, _scale_free_params(args), args.seed)
    m = min(4 * n, n * n) if args.m is None else args.m
    return uniform_random_graph(n, m, args.seed)


def _load_graph(args: argparse.Namespace) -> DirectedGraph:
    if args.graph:
        try:
            return read_edge_list(args.graph)
        except OSError as exc:
            raise UsageError(f"cannot read graph: {exc}") from None
    return _generate(args, args.family)


def _validate_common(args: argparse.Namespace) -> None:
    if not 0.0 <= args.alpha < 1.0:
        raise UsageError(f"--alpha must lie in [0, 1), got {args.alpha}")
    if not 0.0 < args.epsilon < 1.0:
        raise UsageError(f"--epsilon must lie in (0, 1), got {args.epsilon}")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.coarse_points < 9:
        raise UsageError("--coarse-points must be >= 9")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    graph = _generate(args, args.kind)
    text = dump_edge_list(graph, _provenance(args))
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    print(f"n: {graph.n}\nm: {graph.m}", file=sys.stderr)
    return EXIT_OK


def cmd_pagerank(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    G = GoogleOperator.from_graph(graph, args.alpha, args.dangling)
    status = EXIT_OK
    try:
        result = power_method(G, args.epsilon, args.max_iter)
    except ConvergenceError as exc:
        result, status = exc.result, EXIT_NUMERICAL
        print(f"error: {exc}", file=sys.stderr)
    rows = [(i, float(p)) for i, p in enumerate(result.pi)]
    summary: dict[str, Any] = {"iterations": result.iterations, "residual": result.residual}
    if args.alpha > 0:
        summary["bound"] = f"iterations ≤ {iteration_bound(args.alpha, args.epsilon)}"
    summary["converged"] = result.converged
    _emit(args, rows, summary)
    return status


def cmd_gap(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    G = GoogleOperator.from_graph(graph, args.alpha, args.dangling)
    s = _solver(args)
    profile = min_gap(G, s.coarse_points, s.refine_tol, s.method, s.tol, s.seed)
    rows = [(float(x), float(g)) for x, g in profile.samples]
    summary = {
        "delta": profile.delta,
        "delta_inverse": profile.delta_inverse,
        "s_star": profile.s_star,
        "method": profile.method,
        "degraded": profile.degraded,
    }
    _emit(args, rows, summary)
    if args.plot:
        chart = Chart("minimum gap of H(s)", "s", "gap")
        chart.add([r[0] for r in rows], [r[1] for r in rows], "gap(s)", "line")
        chart.add([profile.s_star], [profile.delta], f"delta = {profile.delta:.4g}", "points")
        chart.save(args.plot, " | ".join(_provenance(args)))
    return EXIT_NUMERICAL if profile.degraded else EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    if not args.ns:
        raise UsageError("--ns must list at least one size")
    solver = _solver(args)
    rows: list[tuple] = []
    summary: dict[str, Any] = {}
    chart = Chart("minimum-gap scaling", "n", "1/delta", logx=True, logy=True)
    degraded = False
    if args.family == "worst-case":
        alphas = args.alphas or [args.alpha]
        try:
            scans = worst_case_scaling(alphas, args.ns, solver)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for a, scan in scans.items():
            for n, d, _ in scan.points:
                rows.append((a, n, d, 1.0 / d, None))
            tag = f"alpha={a}"
            if scan.fit is not None:
                summary[f"{tag} beta"] = scan.fit.exponent
                summary[f"{tag} prefactor"] = scan.fit.prefactor
                summary[f"{tag} rescaled_prefactor"] = scan.rescaled_prefactor
                summary[f"{tag} r_squared"] = scan.fit.r_squared
            if scan.diagnostic:
                summary[f"{tag} diagnostic"] = scan.diagnostic
            degraded |= scan.degraded
            ns = [p[0] for p in scan.points]
            chart.add(ns, [1.0 / p[1] for p in scan.points], tag, "points")
            if scan.fit is not None:
                chart.add(ns, scan.fit.predict(ns).tolist(), f"fit beta={scan.fit.exponent:.3f}", "line")
    else:
        if len(args.ns) < 3:
            raise UsageError("random-family scans need at least 3 sizes")
        if args.family == "scale-free":
            scan = www_scaling(_scale_free_params(args), args.ns, args.seeds, args.alpha, solver, args.seed)
        else:
            scan = uniform_scaling(args.edges_per_vertex, args.ns, args.seeds, args.alpha, solver, args.seed)
        for n, sd, d in scan.raw:
            rows.append((args.alpha, n, d, 1.0 / d, sd))
        summary["beta"] = scan.fit.exponent
        summary["prefactor"] = scan.fit.prefactor
        summary["r_squared"] = scan.fit.r_squared
        summary["log_residuals"] = " ".join(f"{r:.4g}" for r in scan.fit.residuals)
        summary["generator"] = json.dumps(scan.generator, sort_keys=True)
        degraded = scan.degraded
        chart.add([r[1] for r in rows], [r[3] for r in rows], "per seed", "points")
        ns = [m[0] for m in scan.medians]
        chart.add(ns, [m[1] for m in scan.medians], "median", "points")
        chart.add(ns, scan.fit.predict(ns).tolist(), f"fit beta={scan.fit.exponent:.3f}", "line")
    summary["degraded"] = degraded
    _emit(args, rows, summary)
    if args.plot:
        chart.save(args.plot, " | ".join(_provenance(args)))
    return EXIT_NUMERICAL if degraded else EXIT_OK


def cmd_adversary(args: argparse.Namespace) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if args.strategy == "exhaustive" and args.n > EXHAUSTIVE_MAX_N:
        raise UsageError(
            f"refusing exhaustive search at n={args.n}: {args.n}**{args.n} candidates exceeds the "
            f"budget guard (n <= {EXHAUSTIVE_MAX_N}); use --hill-climb"
        )
    result = adversarial_search(
        args.n,
        args.alpha,
        args.strategy,
        budget=args.budget,
        seed=args.seed,
        restarts=args.restarts,
        solver=_solver(args),
    )
    best = result.delta
    rows = [
        (i, " ".join(map(str, cols)), d, int(abs(d - best) <= _TIE_TOL))
        for i, (cols, d) in enumerate(result.candidates)
    ]
    wc = worst_case_columns(args.n)
    wc_delta = next((d for cols, d in result.candidates if cols == wc), None)
    if wc_delta is None:
        wc_delta = _solver(args).delta(worst_case_graph(args.n), args.alpha).delta
    summary: dict[str, Any] = {
        "strategy": result.strategy,
        "evaluations": result.evaluations,
        "complete": result.complete,
        "best_columns": " ".join(map(str, result.columns)),
        "best_delta": best,
        "worst_case_delta": wc_delta,
        "worst_case_attains_min": abs(wc_delta - best) <= _TIE_TOL,
        "best_in_worst_case_class": relabel_signature(result.columns) == relabel_signature(wc),
    }
    if result.start_delta is not None:
        summary["improved_on_start"] = result.improved
    _emit(args, rows, summary)
    if args.best_out:
        Path(args.best_out).write_text(dump_edge_list(result.graph, _provenance(args)))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise UsageError("report needs --alpha in (0, 1)")
    graph = _load_graph(args)
    delta = args.delta
    degraded = False
    if delta is None:
        G = GoogleOperator.from_graph(graph, args.alpha, args.dangling)
        s = _solver(args)
        profile = min_gap(G, s.coarse_points, s.refine_tol, s.method, s.tol, s.seed)
        delta, degraded = profile.delta, profile.degraded
    if not delta > 0:
        raise UsageError(f"delta must be positive, got {delta}")
    model = RuntimeModel(args.a_exponent, args.b_exponent)
    report = runtime_report(graph.n, args.alpha, args.epsilon, delta, model)
    rows = report.as_rows()
    _emit(args, rows, {"quantum_over_classical": report.quantum_over_classical})
    return EXIT_NUMERICAL if degraded else EXIT_OK


# ---------------------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"gapbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _validate_common(args)
        with _runtime.threads(args.threads):
            return args.handler(args)
    except (UsageError, DenseThresholdError, ValueError, OSError) as exc:
        print(f"gapbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ArithmeticError, GapbenchError) as exc:
        print(f"gapbench: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
