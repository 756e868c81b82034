"""Problem container, the two benchmark systems and synthetic linear problems."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, RankDeficient, UnknownProblem
from .linalg import as_matrix, as_vector, lstsq_step


@dataclass(frozen=True)
class Problem:
    """Residual ``F(x) + G(x)`` with smooth part F and nonsmooth part G.

    ``jacobian_F`` must be the analytic Jacobian of ``eval_F``. The
    ``known_solution`` and ``known_residual_value`` (the objective
    ``0.5 * ||F + G||^2`` at the solution) are optional reference data.
    """

    name: str
    n: int
    m: int
    eval_F: Callable[[np.ndarray], np.ndarray]
    eval_G: Callable[[np.ndarray], np.ndarray]
    jacobian_F: Callable[[np.ndarray], np.ndarray]
    known_solution: Optional[np.ndarray] = None
    known_residual_value: Optional[float] = None

    def __post_init__(self):
        if self.n < 1 or self.m < self.n:
            raise DimensionMismatch(f"need m >= n >= 1, got m={self.m}, n={self.n}")
        if self.known_solution is not None:
            sol = as_vector(self.known_solution, "known_solution")
            if sol.shape[0] != self.n:
                raise DimensionMismatch("known_solution has wrong dimension")
            object.__setattr__(self, "known_solution", sol)

    def F(self, x) -> np.ndarray:
        return np.asarray(self.eval_F(np.asarray(x, dtype=float)), dtype=float)

    def G(self, x) -> np.ndarray:
        return np.asarray(self.eval_G(np.asarray(x, dtype=float)), dtype=float)

    def J(self, x) -> np.ndarray:
        return np.asarray(self.jacobian_F(np.asarray(x, dtype=float)), dtype=float)

    def residual(self, x) -> np.ndarray:
        return self.F(x) + self.G(x)

    def objective(self, x) -> float:
        r = self.residual(x)
        return 0.5 * float(r @ r)

    def check_point(self, x) -> np.ndarray:
        x = as_vector(x, "x0")
        if x.shape[0] != self.n:
            raise DimensionMismatch(
                f"problem {self.name!r} has dimension {self.n}, got point of dimension {x.shape[0]}"
            )
        return x


def _F_pair(v):
    x, y = v
    return np.array([3 * x**2 * y + y**2 - 1, x**4 + x * y**3 - 1])


def _J_pair(v):
    x, y = v
    return np.array([[6 * x * y, 3 * x**2 + 2 * y], [4 * x**3 + y**3, 3 * x * y**2]])


def _G_pair(v):
    x, y = v
    return np.array([abs(x - 1), abs(y)])


def example1() -> Problem:
    """Square 2x2 nonsmooth system with a zero-residual solution.

    3x^2 y + y^2 - 1 + |x - 1| = 0
    x^4 + x y^3 - 1 + |y| = 0
    """
    return Problem(
        name="example1",
        n=2,
        m=2,
        eval_F=_F_pair,
        eval_G=_G_pair,
        jacobian_F=_J_pair,
        known_solution=np.array([0.89465537, 0.32782652]),
        known_residual_value=0.0,
    )


def example2(split: str = "nonsmooth") -> Problem:
    """Overdetermined 3x2 version of :func:`example1` with the extra equation |x^2 - y| = 0.

    ``split`` selects where the third equation lives:

    * ``"nonsmooth"`` (default): F_3 = 0, G_3 = |x^2 - y|.
    * ``"inner"``: F_3 = x^2 - y, G_3 = |x^2 - y| - (x^2 - y).
    """
    if split == "nonsmooth":

        def F(v):
            return np.append(_F_pair(v), 0.0)

        def G(v):
            x, y = v
            return np.append(_G_pair(v), abs(x**2 - y))

        def J(v):
            return np.vstack([_J_pair(v), [0.0, 0.0]])

    elif split == "inner":

        def F(v):
            x, y = v
            return np.append(_F_pair(v), x**2 - y)

        def G(v):
            x, y = v
            t = x**2 - y
            return np.append(_G_pair(v), abs(t) - t)

        def J(v):
            x, _ = v
            return np.vstack([_J_pair(v), [2 * x, -1.0]])

    else:
        raise ValueError(f"unknown split {split!r}")

    return Problem(
        name="example2" if split == "nonsmooth" else f"example2[{split}]",
        n=2,
        m=3,
        eval_F=F,
        eval_G=G,
        jacobian_F=J,
        known_solution=np.array([0.74862800, 0.43039151]),
        known_residual_value=4.0469349e-2,
    )


def synthetic_linear(C, d, name: str = "linear") -> Problem:
    """F(v) = C v - d, G = 0; the known solution is the least-squares minimizer."""
    C = as_matrix(C, "C")
    d = as_vector(d, "d")
    m, n = C.shape
    if d.shape[0] != m:
        raise DimensionMismatch(f"C is {m}x{n} but d has length {d.shape[0]}")
    if m < n:
        raise RankDeficient("C must have at least as many rows as columns")
    solution = lstsq_step(C, d)
    r = C @ solution - d
    return Problem(
        name=name,
        n=n,
        m=m,
        eval_F=lambda v: C @ v - d,
        eval_G=lambda v: np.zeros(m),
        jacobian_F=lambda v: C.copy(),
        known_solution=solution,
        known_residual_value=0.5 * float(r @ r),
    )


def load_linear(path) -> Problem:
    """Read a linear problem from a whitespace-separated text file.

    Each row holds one equation ``c_i1 ... c_in d_i``: the coefficients of C
    followed by the right-hand side. Blank lines and ``#`` comments are ignored.
    """
    path = Path(path)
    rows = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(tok) for tok in line.split()])
    if not rows:
        raise DimensionMismatch(f"{path}: no rows")
    width = {len(r) for r in rows}
    if len(width) != 1 or width.pop() < 2:
        raise DimensionMismatch(f"{path}: rows must all have the same length >= 2")
    data = np.array(rows)
    return synthetic_linear(data[:, :-1], data[:, -1], name=f"linear:{path}")


_REGISTRY = {
    "example1": example1,
    "example2": example2,
    "example2-inner": lambda: example2(split="inner"),
}


def problem_names() -> list[str]:
    return sorted(_REGISTRY)


def get_problem(name: str) -> Problem:
    """Resolve a registry name, or ``linear:<file>`` for a linear problem on disk."""
    if name.startswith("linear:"):
        path = Path(name[len("linear:"):])
        if not path.is_file():
            raise UnknownProblem(f"linear problem file not found: {path}")
        return load_linear(path)
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise UnknownProblem(f"unknown problem {name!r}; known: {', '.join(problem_names())}") from None
    return factory()
