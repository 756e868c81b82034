"""First-order divided differences of vector-valued maps.

The operator used throughout is the componentwise construction in which
column ``j`` is built from two mixed points sharing the leading coordinates
of ``x`` and the trailing coordinates of ``y``::

    DD(x, y)[:, j] = (g(x_1..x_j, y_{j+1}..y_n) - g(x_1..x_{j-1}, y_j..y_n)) / (x_j - y_j)

The columns telescope, so ``DD(x, y) @ (x - y) == g(x) - g(y)`` whenever
every coordinate takes the quotient branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NonFiniteEvaluation
from .linalg import as_vector

VectorFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DDPolicy:
    """How to treat coordinates where the two points (nearly) coincide.

    When ``|x_j - y_j| <= coincidence_tol * max(1, |x_j|)`` column ``j`` is
    replaced by a central difference with step ``fallback_step``.
    """

    coincidence_tol: float = 1e-12
    fallback_step: float = 1e-7

    def __post_init__(self):
        if not self.coincidence_tol > 0:
            raise ValueError("coincidence_tol must be positive")
        if not self.fallback_step > 0:
            raise ValueError("fallback_step must be positive")


DEFAULT_POLICY = DDPolicy()


def _evaluate(g: VectorFunction, p: np.ndarray) -> np.ndarray:
    val = np.asarray(g(p), dtype=float).reshape(-1)
    if not np.all(np.isfinite(val)):
        raise NonFiniteEvaluation(f"function returned non-finite value at {p.tolist()}")
    return val


def divided_difference(
    g: VectorFunction, x, y, policy: DDPolicy = DEFAULT_POLICY
) -> np.ndarray:
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    n = x.shape[0]
    if y.shape[0] != n:
        raise DimensionMismatch(f"points have different dimensions {n} and {y.shape[0]}")

    # mixed[j] = (x_1..x_j, y_{j+1}..y_n); mixed[0] = y, mixed[n] = x
    mixed = [np.concatenate([x[:j], y[j:]]) for j in range(n + 1)]
    values = [_evaluate(g, p) for p in mixed]
    m = values[0].shape[0]
    out = np.empty((m, n))

    h = policy.fallback_step
    for j in range(n):
        diff = x[j] - y[j]
        if abs(diff) <= policy.coincidence_tol * max(1.0, abs(x[j])):
            plus = mixed[j + 1].copy()
            minus = mixed[j + 1].copy()
            plus[j] = x[j] + h
            minus[j] = x[j] - h
            out[:, j] = (_evaluate(g, plus) - _evaluate(g, minus)) / (2.0 * h)
        else:
            out[:, j] = (values[j + 1] - values[j]) / diff
    return out


def kurchatov_points(x_n, x_prev) -> tuple[np.ndarray, np.ndarray]:
    """The pair (2 x_n - x_prev, x_prev), symmetric about x_n."""
    x_n = as_vector(x_n, "x_n")
    x_prev = as_vector(x_prev, "x_prev")
    if x_n.shape != x_prev.shape:
        raise DimensionMismatch(
            f"points have different dimensions {x_n.shape[0]} and {x_prev.shape[0]}"
        )
    return 2.0 * x_n - x_prev, x_prev.copy()
