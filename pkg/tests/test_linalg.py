import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnkls.errors import DimensionMismatch, RankDeficient
from gnkls.linalg import lstsq_step, norm2, spectral_norm


def normal_equations(A, b):
    # independent oracle: explicit (A^T A)^{-1} A^T b
    return np.linalg.solve(A.T @ A, A.T @ b)


def test_identity():
    np.testing.assert_allclose(lstsq_step(np.eye(2), [3, 4]), [3, 4], rtol=0, atol=1e-15)


def test_mean_of_two():
    np.testing.assert_allclose(lstsq_step([[1.0], [1.0]], [1, 3]), [2.0], atol=1e-15)


def test_random_5x3_matches_normal_equations():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((5, 3))
    b = rng.standard_normal(5)
    d = lstsq_step(A, b)
    ref = normal_equations(A, b)
    assert norm2(d - ref) <= 1e-10 * norm2(ref)


@pytest.mark.parametrize("v, expected", [((0, 0), 0.0), ((3, 4), 5.0), ((1, 1, 1), np.sqrt(3))])
def test_norm2(v, expected):
    assert norm2(v) == pytest.approx(expected, abs=1e-15)


def test_rank_deficient():
    with pytest.raises(RankDeficient):
        lstsq_step([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]], [1, 2, 3])
    with pytest.raises(RankDeficient):
        lstsq_step(np.zeros((3, 2)), [1, 2, 3])
    with pytest.raises(RankDeficient):
        lstsq_step(np.ones((1, 2)), [1.0])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lstsq_step(np.eye(3), [1.0, 2.0])


def test_spectral_norm_matches_svd():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((4, 3))
    assert spectral_norm(A) == pytest.approx(np.linalg.svd(A, compute_uv=False)[0], rel=1e-10)
    assert spectral_norm(np.zeros((2, 2))) == 0.0


@st.composite
def well_conditioned(draw):
    m = draw(st.integers(2, 7))
    n = draw(st.integers(1, m))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    if np.linalg.cond(A) > 1e6:
        A = A + np.eye(m, n) * 10
    return A, rng


@settings(max_examples=60, deadline=None)
@given(well_conditioned())
def test_consistency_and_orthogonality(case):
    A, rng = case
    x = rng.standard_normal(A.shape[1])
    np.testing.assert_allclose(lstsq_step(A, A @ x), x, rtol=1e-10, atol=1e-10 * norm2(x))

    b = rng.standard_normal(A.shape[0])
    d = lstsq_step(A, b)
    assert norm2(A.T @ (A @ d - b)) <= 1e-8 * np.linalg.norm(A, 2) * norm2(b)
    ref = normal_equations(A, b)
    assert norm2(d - ref) <= 1e-8 * max(norm2(ref), 1e-300)
