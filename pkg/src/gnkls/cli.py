"""Command-line entry point: ``gnkls {solve,bench,basin,radius}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bench
from .errors import GNKError
from .solver import Method, SolveConfig, Status, solve

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BREAKDOWN = 3

OUTPUT_DIR_ENV = "GNKLS_OUTPUT_DIR"


class ValidationError(Exception):
    pass


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise ValidationError(f"bad point {text!r}; expected comma-separated numbers") from None


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    path = Path(out)
    if not path.is_absolute() and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text if text.endswith("\n") else text + "\n")


def _config(args) -> SolveConfig:
    return SolveConfig(epsilon=args.eps, max_iter=args.max_iter, x_minus1_offset=args.offset)


def cmd_solve(args) -> int:
    problem = bench.get_problem(args.problem)
    trace = solve(problem, _parse_point(args.x0), Method.parse(args.method), _config(args))
    if args.format == "json":
        _write(bench.dumps(trace.to_dict()), args.out)
    else:
        rows = ["k,x,step_norm,grad_norm"]
        for k, x in enumerate(trace.iterates, start=-1):
            step = grad = ""
            if k >= 1:
                step = bench.fmt_float(trace.step_norms[k - 1])
                grad = bench.fmt_float(trace.grad_norms[k - 1])
            rows.append(f"{k},{' '.join(bench.fmt_float(v) for v in x)},{step},{grad}")
        rows.append(f"# status={trace.status.value} iterations={trace.iterations}")
        _write("\n".join(rows), args.out)
    if trace.status in (Status.BREAKDOWN, Status.NON_FINITE):
        print(f"error: {trace.status.value}: solver stopped after {trace.iterations} steps", file=sys.stderr)
        return EXIT_BREAKDOWN
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.spec:
        try:
            data = json.loads(Path(args.spec).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read spec {args.spec}: {exc}") from None
        try:
            spec = bench.BenchmarkSpec.from_dict(data)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed spec: {exc}") from None
    else:
        spec = bench.reference_spec()
    rows = bench.run_benchmark(spec)
    text = bench.benchmark_json(rows) if args.format == "json" else bench.benchmark_csv(rows)
    _write(text, args.out)
    return EXIT_OK


def cmd_basin(args) -> int:
    grid = bench.GridSpec.parse(args.grid)
    cells = bench.basin_scan(args.problem, args.method, grid, _config(args))
    _write(bench.basin_csv(cells), args.out)
    return EXIT_OK


def cmd_radius(args) -> int:
    if args.radius <= 0 or args.samples < 1:
        raise ValidationError("radius must be positive and samples >= 1")
    x_star, report = bench.problem_radius_report(args.problem, args.radius, args.samples, args.seed)
    payload = {"problem": args.problem, "x_star": list(x_star), **report.to_dict()}
    _write(bench.dumps(payload), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gnkls", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--eps", type=float, default=1e-8)
        p.add_argument("--max-iter", type=int, default=100)
        p.add_argument("--offset", type=float, default=1e-4, help="x_{-1} = x_0 - offset")

    p = sub.add_parser("solve", help="run one iteration and print its trace")
    p.add_argument("--problem", required=True)
    p.add_argument("--method", default="gnk", choices=[m.value.lower() for m in Method])
    p.add_argument("--x0", required=True, help='start point, e.g. "1,0.1"')
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="iteration-count table (defaults to the two example problems)")
    p.add_argument("--spec", help="JSON benchmark spec")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("basin", help="scan start points on a 2-D grid")
    p.add_argument("--problem", required=True)
    p.add_argument("--method", default="gnk", choices=[m.value.lower() for m in Method])
    p.add_argument("--grid", required=True, help='"xlo,xhi,steps;ylo,yhi,steps"')
    p.add_argument("--out")
    solver_flags(p)
    p.set_defaults(func=cmd_basin)

    p = sub.add_parser("radius", help="estimate constants and report convergence radii")
    p.add_argument("--problem", required=True)
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_radius)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, GNKError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
