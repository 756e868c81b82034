"""Local convergence radius and error constants of the Gauss-Newton-Kurchatov iteration.

Constant names follow the analysis:

* ``B``      bound on ||(A*^T A*)^{-1}||, A* = F'(x*) + G[x*, x*]
* ``alpha``  bound on ||A*||
* ``eta``    residual norm ||F(x*) + G(x*)||
* ``L0``     center-Lipschitz constant of F' about x*
* ``M0, N0`` Lipschitz constants of the first and second divided differences of G on D
* ``L, M, N`` the same quantities restricted to D0 = D ∩ ball(x*, gamma)
* ``L1``     full Lipschitz constant of F' on D

Roots are found by bracket doubling from [0, 1] followed by bisection; both
``h`` and ``q`` are nondecreasing on [0, inf) for nonnegative constants.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import BracketNonpositive, InvalidConstants, SingularAtSolution
from .linalg import RANK_RTOL, spectral_norm

REASON_CONDITION = "condition15_violated"
REASON_NO_BRACKET = "no_bracket"

_BRACKET_LIMIT = 1e12


@dataclass(frozen=True)
class LipschitzConstants:
    B: float
    alpha: float
    eta: float
    L0: float
    L: float
    L1: float
    M0: float
    M: float
    N0: float
    N: float
    # "given" for user-supplied values, "sampled_lower_bound" for estimates
    source: str = "given"

    def __post_init__(self):
        if not (self.B > 0 and math.isfinite(self.B)):
            raise InvalidConstants(f"B must be positive and finite, got {self.B}")
        for name in ("alpha", "eta", "L0", "L", "L1", "M0", "M", "N0", "N"):
            val = getattr(self, name)
            if not (val >= 0 and math.isfinite(val)):
                raise InvalidConstants(f"{name} must be finite and >= 0, got {val}")

    def ordered(self) -> bool:
        """True when L0 <= L1, L <= L1, M <= M0 and N <= N0."""
        return self.L0 <= self.L1 and self.L <= self.L1 and self.M <= self.M0 and self.N <= self.N0

    def prior(self) -> "LipschitzConstants":
        """Constants of the earlier analysis: (L0, L, M, N) -> (L1, L1, M0, N0)."""
        return replace(self, L0=self.L1, L=self.L1, M=self.M0, N=self.N0)


def h_function(t: float, c: LipschitzConstants) -> float:
    """h(t) = B [2 alpha + (L0 + 2 M0) t + N0 t^2] [(L0/2 + M0) t + N0 t^2]."""
    return c.B * (2 * c.alpha + (c.L0 + 2 * c.M0) * t + c.N0 * t**2) * (
        (c.L0 / 2 + c.M0) * t + c.N0 * t**2
    )


def h_proof_bound(t: float, c: LipschitzConstants) -> float:
    """The bracket that bounds ||I - (A*^T A*)^{-1} A_0^T A_0|| inside the radius argument.

    Differs from :func:`h_function` in using 4 N0 t^2 and (L0 + 2 M0) t in the
    second factor. Kept separate so the two can be compared.
    """
    s = (c.L0 + 2 * c.M0) * t + 4 * c.N0 * t**2
    return c.B * (2 * c.alpha + s) * s


def _phi(r: float, c: LipschitzConstants) -> float:
    return c.alpha + (c.L + 2 * c.M) * r + 4 * c.N * r**2


def _restricted_part(r: float, c: LipschitzConstants) -> float:
    return _phi(r, c) * ((c.L / 2 + c.M) * r + 4 * c.N * r**2) + (c.L + 2 * c.M + 4 * c.N * r) * c.eta


def _center_part(r: float, c: LipschitzConstants) -> float:
    s = (c.L0 + 2 * c.M0) * r + 4 * c.N0 * r**2
    return (2 * c.alpha + s) * s


def q_function(r: float, c: LipschitzConstants) -> float:
    return c.B * _restricted_part(r, c) + c.B * _center_part(r, c) - 1.0


def condition15(c: LipschitzConstants) -> bool:
    """B (L + 2M) eta < 1, i.e. q(0) < 0."""
    return bool(c.B * (c.L + 2 * c.M) * c.eta < 1.0)


def g_bracket(r: float, c: LipschitzConstants) -> float:
    return 1.0 - c.B * _center_part(r, c)


def g_function(r: float, c: LipschitzConstants) -> float:
    bracket = g_bracket(r, c)
    if not bracket > 0:
        raise BracketNonpositive(f"1 - B(...)(...) = {bracket:.6g} <= 0 at r = {r:.6g}")
    return c.B / bracket


def p_function(r: float, c: LipschitzConstants) -> float:
    return g_function(r, c) * _restricted_part(r, c)


def _bisect_increasing(
    f: Callable[[float], float], target_tol: float
) -> tuple[Optional[float], Optional[str]]:
    """Root of a nondecreasing f with f(0) < 0 on (0, inf)."""
    lo, hi = 0.0, 1.0
    while f(hi) <= 0:
        lo, hi = hi, 2 * hi
        if hi > _BRACKET_LIMIT:
            return None, REASON_NO_BRACKET
    best, fbest = hi, abs(f(hi))
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if abs(fm) < fbest:
            best, fbest = mid, abs(fm)
        if abs(fm) <= target_tol:
            return mid, None
        if fm > 0:
            hi = mid
        else:
            lo = mid
    if abs(f(lo)) < fbest:
        best = lo
    return best, None


def gamma_root(c: LipschitzConstants) -> Optional[float]:
    """Smallest t > 0 with h(t) = 1, or None if h stays below 1 up to 1e12."""
    root, _ = _bisect_increasing(lambda t: h_function(t, c) - 1.0, 1e-12)
    return root


def r_star(c: LipschitzConstants) -> Optional[float]:
    """Unique positive zero of q, or None when condition15 fails or no bracket exists."""
    root, _ = _r_star_with_reason(c)
    return root


def _r_star_with_reason(c: LipschitzConstants) -> tuple[Optional[float], Optional[str]]:
    q0 = q_function(0.0, c)
    if not q0 < 0:
        return None, REASON_CONDITION
    return _bisect_increasing(lambda r: q_function(r, c), 1e-12 * (1 + abs(q0)))


def error_constants(c: LipschitzConstants, r: Optional[float] = None) -> tuple[float, float, float, float, float]:
    """(g(r*), C1, C2, C3, C4) for the error recursion.

    ``r`` defaults to r*; raises BracketNonpositive if g is undefined there.
    """
    if r is None:
        r = r_star(c)
        if r is None:
            raise InvalidConstants("r* does not exist for these constants")
    g = g_function(r, c)
    phi = _phi(r, c)
    C1 = g * (c.L + 2 * c.M) * c.eta
    C2 = g * c.N * c.eta
    C3 = g * (c.L / 2 + c.M) * phi
    C4 = g * c.N * phi
    return g, C1, C2, C3, C4


def ab_functions(r: float, c: LipschitzConstants) -> tuple[float, float]:
    """a(r) and b(r), the coefficients of the two-term error majorant."""
    g = g_function(r, c)
    a = g * ((c.L + 2 * c.M + 3 * c.N * r) * c.eta + _phi(r, c) * ((c.L / 2 + c.M) * r + 4 * c.N * r**2))
    b = g * c.N * r * c.eta
    return a, b


def majorant_roots(a: float, b: float) -> tuple[float, float]:
    """Roots lambda1 <= lambda2 of lambda^2 = a lambda + b, computed without cancellation."""
    disc = math.sqrt(a * a + 4 * b)
    lam2 = 0.5 * (a + disc)
    lam1 = -b / lam2 if lam2 != 0 else 0.0
    return lam1, lam2


def majorant_sequence(a: float, b: float, theta_minus1: float, theta_0: float, n_max: int) -> list[float]:
    """rho_{-1}, ..., rho_{n_max} of rho_{n+1} = a rho_n + b rho_{n-1} in closed form.

    Uses rho_n = w1 lambda1^n + w2 lambda2^n. If b = 0 the lambda1 term
    vanishes for n >= 0 and rho_n = rho_0 a^n.
    """
    if a < 0 or b < 0:
        raise InvalidConstants("a and b must be nonnegative")
    if not a + b < 1:
        raise InvalidConstants(f"need a + b < 1, got {a + b}")
    if theta_minus1 < 0 or theta_0 < 0:
        raise InvalidConstants("initial terms must be nonnegative")
    if n_max < -1:
        raise ValueError("n_max must be >= -1")

    out = [float(theta_minus1)]
    if n_max == -1:
        return out
    if b == 0.0:
        # a == b == 0 lands here too: rho_n = 0 for n >= 1
        return out + [theta_0 * a**n for n in range(0, n_max + 1)]

    lam1, lam2 = majorant_roots(a, b)
    inv1, inv2 = 1.0 / lam1, 1.0 / lam2
    w1 = (inv2 * theta_0 - theta_minus1) / (inv2 - inv1)
    w2 = (theta_minus1 - inv1 * theta_0) / (inv2 - inv1)
    return out + [w1 * lam1**n + w2 * lam2**n for n in range(0, n_max + 1)]


def majorant_recurrence(a: float, b: float, theta_minus1: float, theta_0: float, n_max: int) -> list[float]:
    """The same sequence by direct iteration of the recurrence."""
    out = [float(theta_minus1), float(theta_0)]
    for _ in range(n_max):
        out.append(a * out[-1] + b * out[-2])
    return out[: n_max + 2]


def compare_radii(c: LipschitzConstants) -> tuple[Optional[float], Optional[float]]:
    """(r*, r*^1): the radius from these constants and from the prior-analysis constants."""
    return r_star(c), r_star(c.prior())


@dataclass
class RadiusReport:
    constants: LipschitzConstants
    gamma: Optional[float]
    gamma_reason: Optional[str]
    r_star: Optional[float]
    r_star_reason: Optional[str]
    r_star_prior: Optional[float]
    r_star_prior_reason: Optional[str]
    g_at_rstar: Optional[float]
    C1: Optional[float]
    C2: Optional[float]
    C3: Optional[float]
    C4: Optional[float]
    a_at_rstar: Optional[float]
    b_at_rstar: Optional[float]
    h_at_rstar: Optional[float]
    h_proof_at_rstar: Optional[float]
    condition15_holds: bool
    condition15_prior_holds: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["constants"] = asdict(self.constants)
        return d


def radius_report(c: LipschitzConstants) -> RadiusReport:
    gamma = gamma_root(c)
    rs, rs_reason = _r_star_with_reason(c)
    rp, rp_reason = _r_star_with_reason(c.prior())

    g = C1 = C2 = C3 = C4 = a = b = h_rs = hp_rs = None
    if rs is not None:
        h_rs = h_function(rs, c)
        hp_rs = h_proof_bound(rs, c)
        g, C1, C2, C3, C4 = error_constants(c, rs)
        a, b = ab_functions(rs, c)

    return RadiusReport(
        constants=c,
        gamma=gamma,
        gamma_reason=None if gamma is not None else REASON_NO_BRACKET,
        r_star=rs,
        r_star_reason=rs_reason,
        r_star_prior=rp,
        r_star_prior_reason=rp_reason,
        g_at_rstar=g,
        C1=C1,
        C2=C2,
        C3=C3,
        C4=C4,
        a_at_rstar=a,
        b_at_rstar=b,
        h_at_rstar=h_rs,
        h_proof_at_rstar=hp_rs,
        condition15_holds=condition15(c),
        condition15_prior_holds=condition15(c.prior()),
    )


def _sample_ball(rng: np.random.Generator, center: np.ndarray, radius: float, count: int) -> np.ndarray:
    n = center.shape[0]
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / n)
    return center + directions * radii[:, None]


def estimate_constants(
    problem,
    x_star,
    radius: float,
    samples: int = 2000,
    seed: int = 0,
    n_default: float = 0.0,
    policy=None,
) -> LipschitzConstants:
    """Sampled lower bounds on the Lipschitz family around ``x_star``.

    B, alpha and eta are evaluated at ``x_star``. The L, M and N families are
    maxima of the ratios in their defining inequalities over random points in
    the ball of the given radius; the restricted constants use the ball of
    radius min(radius, gamma). N-type constants use the ratio
    ||G[2x - z, z] - G[x, x]|| / ||x - z||^2, which is how the three-point
    condition enters the radius argument; ``n_default`` replaces them when no
    finite ratio is available.
    """
    from .divdiff import DEFAULT_POLICY, divided_difference

    policy = policy or DEFAULT_POLICY
    if radius <= 0:
        raise ValueError("radius must be positive")
    x_star = np.asarray(x_star, dtype=float)
    rng = np.random.default_rng(seed)

    def dd(u, v):
        return divided_difference(problem.G, u, v, policy)

    A_star = problem.J(x_star) + dd(x_star, x_star)
    S = A_star.T @ A_star
    eig = np.linalg.eigvalsh(S)
    if eig[0] <= RANK_RTOL * max(eig[-1], 1.0):
        raise SingularAtSolution("A*^T A* is singular at the supplied solution")
    B = spectral_norm(np.linalg.inv(S))
    alpha = spectral_norm(A_star)
    eta = float(np.linalg.norm(problem.residual(x_star)))

    def ratio_max(values):
        vals = [v for v in values if math.isfinite(v)]
        return max(vals) if vals else 0.0

    def sample_family(rad: float):
        pts = _sample_ball(rng, x_star, rad, 4 * samples)
        x, y, u, v = pts[:samples], pts[samples : 2 * samples], pts[2 * samples : 3 * samples], pts[3 * samples :]
        J_star = problem.J(x_star)
        center = []
        full = []
        m_ratios = []
        n_ratios = []
        for i in range(samples):
            dx = np.linalg.norm(x[i] - x_star)
            if dx > 0:
                center.append(np.linalg.norm(problem.J(x[i]) - J_star, 2) / dx)
            dxy = np.linalg.norm(x[i] - y[i])
            if dxy > 0:
                full.append(np.linalg.norm(problem.J(x[i]) - problem.J(y[i]), 2) / dxy)
            denom = np.linalg.norm(x[i] - u[i]) + np.linalg.norm(y[i] - v[i])
            if denom > 0:
                m_ratios.append(np.linalg.norm(dd(x[i], y[i]) - dd(u[i], v[i]), 2) / denom)
            # Kurchatov pair about x[i] with partner y[i]; 2x - y may leave the ball
            if dxy > 0:
                k = dd(2 * x[i] - y[i], y[i]) - dd(x[i], x[i])
                n_ratios.append(np.linalg.norm(k, 2) / dxy**2)
        return ratio_max(center), ratio_max(full), ratio_max(m_ratios), ratio_max(n_ratios)

    L0, L1, M0, N0 = sample_family(radius)
    if N0 == 0.0:
        N0 = n_default
    provisional = LipschitzConstants(B=B, alpha=alpha, eta=eta, L0=L0, L=L1, L1=L1, M0=M0, M=M0, N0=N0, N=N0)
    gamma = gamma_root(provisional)
    inner = radius if gamma is None else min(radius, gamma)

    _, L, M, N = sample_family(inner)
    if N == 0.0:
        N = n_default
    # D0 is a subset of D, so every restricted sample is also a full sample
    L1 = max(L1, L, L0)
    M0 = max(M0, M)
    N0 = max(N0, N)
    return LipschitzConstants(
        B=B, alpha=alpha, eta=eta, L0=L0, L=L, L1=L1, M0=M0, M=M, N0=N0, N=N, source="sampled_lower_bound"
    )
