"""Benchmarks, basin-of-attraction scans and their CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonTwoDimensional
from .problems import Problem, get_problem
from .solver import Method, SolveConfig, solve

# Published iteration counts, keyed by (problem, start) -> {method: count}
REFERENCE_COUNTS = {
    ("example1", (1.0, 0.1)): {"KUR": 6, "GNK": 5, "SEC": 6, "GNS": 5},
    ("example1", (3.0, 1.0)): {"KUR": 12, "GNK": 9, "SEC": 11, "GNS": 10},
    ("example1", (0.5, 0.5)): {"KUR": 12, "GNK": 10, "SEC": 18, "GNS": 10},
    ("example2", (1.0, 0.1)): {"KUR": 16, "GNK": 14, "SEC": 21, "GNS": 11},
    ("example2", (3.0, 1.0)): {"KUR": 21, "GNK": 18, "SEC": 25, "GNS": 15},
    ("example2", (0.5, 0.5)): {"KUR": 16, "GNK": 14, "SEC": 19, "GNS": 13},
}

REFERENCE_STARTS = [(1.0, 0.1), (3.0, 1.0), (0.5, 0.5)]


def fmt_float(v: float) -> str:
    """17 significant digits; non-finite values become ``nan``/``inf``."""
    v = float(v)
    if math.isfinite(v):
        return format(v, ".17g")
    return str(v)


def _json_value(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits (non-finite -> null)."""
    return _json_value(obj)


@dataclass(frozen=True)
class BenchmarkSpec:
    problems: list[str]
    methods: list[Method]
    starts: list[tuple[float, ...]]
    config: SolveConfig = field(default_factory=SolveConfig)

    def __post_init__(self):
        if not self.problems or not self.methods or not self.starts:
            raise ValueError("problems, methods and starts must be nonempty")

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkSpec":
        cfg = data.get("config", {}) or {}
        allowed = {"epsilon", "max_iter", "x_minus1_offset", "stop_index"}
        unknown = set(cfg) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(
            problems=list(data["problems"]),
            methods=[Method.parse(m) for m in data["methods"]],
            starts=[tuple(float(v) for v in s) for s in data["starts"]],
            config=SolveConfig(**cfg),
        )


@dataclass(frozen=True)
class BenchmarkRow:
    problem: str
    start: tuple[float, ...]
    method: Method
    status: str
    iterations: int


def reference_spec(config: SolveConfig | None = None) -> BenchmarkSpec:
    return BenchmarkSpec(
        problems=["example1", "example2"],
        methods=[Method.KUR, Method.GNK, Method.SEC, Method.GNS],
        starts=list(REFERENCE_STARTS),
        config=config or SolveConfig(),
    )


def run_benchmark(spec: BenchmarkSpec) -> list[BenchmarkRow]:
    """One row per (problem, start, method), ordered by problem, start, method.

    Every problem name and start dimension is validated before any solve runs.
    """
    problems: dict[str, Problem] = {name: get_problem(name) for name in spec.problems}
    for name, prob in problems.items():
        for s in spec.starts:
            if len(s) != prob.n:
                raise DimensionMismatch(f"start {s} does not match dimension {prob.n} of {name!r}")

    rows = []
    for name in spec.problems:
        prob = problems[name]
        for s in spec.starts:
            for method in spec.methods:
                trace = solve(prob, np.array(s, dtype=float), method, spec.config)
                rows.append(BenchmarkRow(name, tuple(s), method, trace.status.value, trace.iterations))
    return rows


def benchmark_csv(rows: Iterable[BenchmarkRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["problem", "x0", "method", "status", "iterations"])
    for r in rows:
        w.writerow([r.problem, " ".join(fmt_float(v) for v in r.start), r.method.value, r.status, r.iterations])
    return buf.getvalue()


def benchmark_json(rows: Iterable[BenchmarkRow]) -> str:
    return dumps(
        [
            {
                "problem": r.problem,
                "x0": list(r.start),
                "method": r.method.value,
                "status": r.status,
                "iterations": r.iterations,
            }
            for r in rows
        ]
    )


@dataclass(frozen=True)
class GridSpec:
    """Axis ranges ``(lo, hi, steps)``; cells are centered inside [lo, hi]."""

    x_range: tuple[float, float, int]
    y_range: tuple[float, float, int]

    def __post_init__(self):
        for lo, hi, steps in (self.x_range, self.y_range):
            if not lo < hi:
                raise ValueError(f"grid range needs lo < hi, got {lo}, {hi}")
            if int(steps) != steps or steps < 2:
                raise ValueError(f"grid needs at least 2 integer steps, got {steps}")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``"xlo,xhi,steps;ylo,yhi,steps"``."""
        try:
            xs, ys = text.split(";")
            xlo, xhi, xn = xs.split(",")
            ylo, yhi, yn = ys.split(",")
            return cls((float(xlo), float(xhi), int(xn)), (float(ylo), float(yhi), int(yn)))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bad grid {text!r}: {exc}") from None

    @staticmethod
    def centers(lo: float, hi: float, steps: int) -> np.ndarray:
        width = (hi - lo) / steps
        return lo + width * (np.arange(steps) + 0.5)


@dataclass(frozen=True)
class BasinCell:
    x: float
    y: float
    status: str
    iterations: int


def basin_scan(problem: Problem | str, method, grid: GridSpec, config: SolveConfig | None = None) -> list[BasinCell]:
    """Independent solves from every cell center, rows ordered by y then x."""
    if isinstance(problem, str):
        problem = get_problem(problem)
    if problem.n != 2:
        raise NonTwoDimensional(f"basin scans need a 2-D problem, {problem.name!r} has n={problem.n}")
    method = Method.parse(method)
    config = config or SolveConfig()
    xs = GridSpec.centers(*grid.x_range)
    ys = GridSpec.centers(*grid.y_range)
    cells = []
    for y in ys:
        for x in xs:
            trace = solve(problem, np.array([x, y]), method, config)
            cells.append(BasinCell(float(x), float(y), trace.status.value, trace.iterations))
    return cells


def basin_csv(cells: Sequence[BasinCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "status", "iterations"])
    for c in cells:
        w.writerow([fmt_float(c.x), fmt_float(c.y), c.status, c.iterations])
    return buf.getvalue()


def problem_radius_report(problem: Problem | str, sample_radius: float, samples: int = 2000, seed: int = 0):
    """Estimate the constants around the refined known solution and evaluate the radius theory."""
    from .solver import refine_solution
    from .theory import estimate_constants, radius_report

    if isinstance(problem, str):
        problem = get_problem(problem)
    if problem.known_solution is None:
        raise ValueError(f"problem {problem.name!r} has no known solution")
    x_star = refine_solution(problem)
    constants = estimate_constants(problem, x_star, sample_radius, samples=samples, seed=seed)
    report = radius_report(constants)
    return x_star, report
