"""Gauss-Newton-Kurchatov and comparator iterations for F + G least squares.

All four methods share one loop::

    x_{n+1} = x_n - argmin_d ||A_n d - (F(x_n) + G(x_n))||

and differ only in the operator ``A_n``:

=====  ===================================================
GNK    F'(x_n) + G[2x_n - x_{n-1}, x_{n-1}]
GNS    F'(x_n) + G[x_n, x_{n-1}]
SEC    F[x_n, x_{n-1}] + G[x_n, x_{n-1}]
KUR    F[2x_n - x_{n-1}, x_{n-1}] + G[2x_n - x_{n-1}, x_{n-1}]
=====  ===================================================

For square systems GNK is the Newton-Kurchatov method.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .divdiff import DEFAULT_POLICY, DDPolicy, divided_difference, kurchatov_points
from .errors import InsufficientData, NonFiniteEvaluation, RankDeficient
from .linalg import lstsq_step, norm2
from .problems import Problem


class Method(str, enum.Enum):
    GNK = "GNK"
    GNS = "GNS"
    SEC = "SEC"
    KUR = "KUR"

    @classmethod
    def parse(cls, value) -> "Method":
        if isinstance(value, Method):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(
                f"unknown method {value!r}; expected one of {', '.join(m.value.lower() for m in cls)}"
            ) from None


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    BREAKDOWN = "Breakdown"
    NON_FINITE = "NonFinite"


@dataclass(frozen=True)
class SolveConfig:
    """Stopping and start-up parameters.

    ``stop_index`` chooses the residual used in the gradient test
    ``||A_n^T (F + G)(x)|| <= epsilon``: ``"new"`` evaluates it at x_{n+1},
    ``"old"`` at x_n. The auxiliary start is ``x_{-1} = x_0 - x_minus1_offset``
    componentwise.
    """

    epsilon: float = 1e-8
    max_iter: int = 100
    x_minus1_offset: float = 1e-4
    dd_policy: DDPolicy = field(default_factory=lambda: DEFAULT_POLICY)
    stop_index: str = "new"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if self.stop_index not in ("new", "old"):
            raise ValueError("stop_index must be 'new' or 'old'")


@dataclass
class IterationTrace:
    method: Method
    problem: str
    epsilon: float
    iterates: list[np.ndarray]
    step_norms: list[float] = field(default_factory=list)
    grad_norms: list[float] = field(default_factory=list)
    status: Status = Status.MAX_ITERATIONS
    iterations: int = 0

    @property
    def x0(self) -> np.ndarray:
        return self.iterates[1]

    @property
    def x_final(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def effective_steps(self) -> int:
        """Number of steps that actually moved the iterate by more than epsilon."""
        return sum(1 for s in self.step_norms if s > self.epsilon)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "problem": self.problem,
            "x0": [float(v) for v in self.x0],
            "epsilon": self.epsilon,
            "status": self.status.value,
            "iterations": self.iterations,
            "iterates": [[float(v) for v in x] for x in self.iterates],
            "step_norms": list(self.step_norms),
            "grad_norms": list(self.grad_norms),
        }


def assemble_operator(
    problem: Problem,
    x_n,
    x_prev,
    method: Method,
    policy: DDPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    method = Method.parse(method)
    x_n = np.asarray(x_n, dtype=float)
    x_prev = np.asarray(x_prev, dtype=float)
    if method in (Method.GNK, Method.KUR):
        u, v = kurchatov_points(x_n, x_prev)
    else:
        u, v = x_n, x_prev

    dG = divided_difference(problem.G, u, v, policy)
    if method in (Method.GNK, Method.GNS):
        dF = problem.J(x_n)
        if not np.all(np.isfinite(dF)):
            raise NonFiniteEvaluation("Jacobian of F is not finite")
    else:
        dF = divided_difference(problem.F, u, v, policy)
    return dF + dG


def solve(
    problem: Problem,
    x0,
    method: Method = Method.GNK,
    config: Optional[SolveConfig] = None,
) -> IterationTrace:
    """Run one iteration from ``x0``; failures are reported through ``trace.status``."""
    config = config or SolveConfig()
    method = Method.parse(method)
    x = problem.check_point(x0)
    x_prev = x - config.x_minus1_offset

    trace = IterationTrace(
        method=method,
        problem=problem.name,
        epsilon=config.epsilon,
        iterates=[x_prev.copy(), x.copy()],
    )
    eps = config.epsilon

    try:
        r = problem.residual(x)
        if not np.all(np.isfinite(r)):
            trace.status = Status.NON_FINITE
            return trace

        for _ in range(config.max_iter):
            try:
                A = assemble_operator(problem, x, x_prev, method, config.dd_policy)
                delta = lstsq_step(A, r)
            except RankDeficient:
                trace.status = Status.BREAKDOWN
                return trace

            x_new = x - delta
            if not np.all(np.isfinite(x_new)):
                trace.status = Status.NON_FINITE
                return trace
            r_new = problem.residual(x_new)

            trace.iterates.append(x_new.copy())
            trace.iterations += 1
            trace.step_norms.append(norm2(x_new - x))
            if not np.all(np.isfinite(r_new)):
                trace.grad_norms.append(float("nan"))
                trace.status = Status.NON_FINITE
                return trace
            grad = A.T @ (r_new if config.stop_index == "new" else r)
            trace.grad_norms.append(norm2(grad))

            if trace.step_norms[-1] <= eps and trace.grad_norms[-1] <= eps:
                trace.status = Status.CONVERGED
                return trace

            x_prev, x, r = x, x_new, r_new
    except NonFiniteEvaluation:
        trace.status = Status.NON_FINITE
        return trace
    except FloatingPointError:
        trace.status = Status.NON_FINITE
        return trace

    trace.status = Status.MAX_ITERATIONS
    return trace


def refine_solution(problem: Problem, x_start=None, epsilon: float = 1e-14, max_iter: int = 200) -> np.ndarray:
    """Polish a reference solution by running GNK to a tight tolerance.

    Falls back to the best iterate seen if the tight tolerance is not met
    within ``max_iter`` steps (nonzero-residual problems converge linearly).
    """
    if x_start is None:
        if problem.known_solution is None:
            raise ValueError(f"problem {problem.name!r} has no known solution to refine")
        x_start = problem.known_solution
    trace = solve(problem, x_start, Method.GNK, SolveConfig(epsilon=epsilon, max_iter=max_iter))
    if trace.converged:
        return trace.x_final
    if trace.step_norms:
        # iterates[k + 2] is the point reached by step k
        best = int(np.argmin(trace.step_norms))
        return trace.iterates[best + 2]
    return np.asarray(x_start, dtype=float)


def order_from_errors(errors, window: int = 3) -> float:
    """Fit ``log e_{n+1} = p log e_n + c`` over the last ``window`` usable pairs.

    Errors at or below 100 machine epsilons are unusable (rounding noise).
    """
    floor = 100 * np.finfo(float).eps
    errors = [float(e) for e in errors]
    pairs = [(e0, e1) for e0, e1 in zip(errors[:-1], errors[1:]) if e0 > floor and e1 > floor]
    if len(pairs) < 2:
        raise InsufficientData(f"need at least two usable error pairs, got {len(pairs)}")
    pairs = pairs[-window:]
    slope, _ = np.polyfit(np.log([p[0] for p in pairs]), np.log([p[1] for p in pairs]), 1)
    return float(slope)


def empirical_order(trace: IterationTrace, x_star, window: int = 3) -> float:
    """Convergence order estimated from the distances of the iterates to ``x_star``."""
    x_star = np.asarray(x_star, dtype=float)
    # x_{-1} is synthetic; start at x_0
    return order_from_errors([norm2(x - x_star) for x in trace.iterates[1:]], window)
