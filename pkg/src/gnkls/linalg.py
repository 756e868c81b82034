"""Dense vector/matrix helpers and the least-squares step used by every iteration."""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, NonFiniteEvaluation, RankDeficient

# relative cutoff on |diag(R)| below which A is treated as column-rank deficient
RANK_RTOL = 1e-12


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DimensionMismatch(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEvaluation(f"{name} has non-finite entries")
    return arr


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEvaluation(f"{name} has non-finite entries")
    return arr


def norm2(v) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(np.asarray(v, dtype=float).reshape(-1)))


def lstsq_step(A, b) -> np.ndarray:
    """Return delta minimizing ||A delta - b||_2 for a full-column-rank A (m >= n).

    Solved through a reduced QR factorization; for full-rank A the result
    equals (A^T A)^{-1} A^T b.

    Raises
    ------
    DimensionMismatch
        If ``b`` does not have one entry per row of ``A``.
    RankDeficient
        If m < n or the smallest |R_ii| falls below ``RANK_RTOL`` times the largest.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    m, n = A.shape
    if b.shape[0] != m:
        raise DimensionMismatch(f"A is {m}x{n} but b has length {b.shape[0]}")
    if m < n:
        raise RankDeficient(f"underdetermined system: {m} rows < {n} columns")

    Q, R = np.linalg.qr(A, mode="reduced")
    diag = np.abs(np.diag(R))
    dmax = diag.max()
    if dmax == 0.0 or diag.min() < RANK_RTOL * dmax:
        raise RankDeficient(
            f"A is numerically rank deficient (min|R_ii|={diag.min():.3e}, max|R_ii|={dmax:.3e})"
        )
    return solve_triangular(R, Q.T @ b, lower=False)


def spectral_norm(A, tol: float = 1e-14, max_iter: int = 1000) -> float:
    """Largest singular value of A by power iteration on A^T A."""
    A = np.asarray(A, dtype=float)
    if not np.any(A):
        return 0.0
    S = A.T @ A
    # deterministic start that cannot be orthogonal to every eigenvector
    v = np.ones(S.shape[0]) / np.sqrt(S.shape[0]) + np.arange(S.shape[0]) * 1e-3
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = S @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam_new = float(v @ S @ v)
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            lam = lam_new
            break
        lam = lam_new
    return float(np.sqrt(max(lam, 0.0)))
