import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from loewnerpencil import numerics as nx

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(min_side=1, max_side=6):
    return st.tuples(st.integers(min_side, max_side), st.integers(min_side, max_side)).flatmap(
        lambda s: st.tuples(arrays(float, s, elements=finite), arrays(float, s, elements=finite)).map(
            lambda ab: ab[0] + 1j * ab[1]
        )
    )


@given(complex_matrices())
def test_svd_reconstructs_and_is_sorted(m):
    res = nx.svd(m)
    s = res.singular_values
    assert np.all(np.diff(s) <= 1e-12 * max(1.0, s[0]))
    assert np.allclose(res.reconstruct(), m, atol=1e-10 * max(1.0, s[0]))
    assert np.allclose(res.u.conj().T @ res.u, np.eye(s.size), atol=1e-10)


@given(complex_matrices())
def test_pinv_penrose_conditions(m):
    x = nx.pinv(m)
    scale = max(1.0, nx.norm2(m))
    assert np.allclose(m @ x @ m, m, atol=1e-8 * scale)
    assert np.allclose((m @ x).conj().T, m @ x, atol=1e-8)


def test_pinv_truncates_below_rtol():
    m = np.diag([1.0, 1e-13])
    assert np.allclose(nx.pinv(m), np.diag([1.0, 0.0]))
    assert np.allclose(nx.pinv(m, rtol=1e-14), np.diag([1.0, 1e13]))


def test_pinv_rejects_bad_rtol():
    with pytest.raises(ValueError):
        nx.pinv(np.eye(2), rtol=0.0)


def test_cond_sentinel_for_singular_matrix():
    with pytest.raises(nx.NumericsError):
        nx.cond2(np.zeros((2, 2)))
    assert nx.cond2(np.diag([1.0, 0.0])) == np.inf
    assert nx.cond2(np.diag([4.0, 2.0])) == pytest.approx(2.0)


def test_numerical_rank():
    a = np.outer([1, 2, 3], [1, 1]) + 1e-12 * np.eye(3, 2)
    assert nx.numerical_rank(a) == 1
    assert nx.numerical_rank(np.eye(3)) == 3


def test_as_matrix_rejects_nonfinite_and_empty():
    with pytest.raises(ValueError, match="NaN"):
        nx.as_matrix([[1.0, np.nan]])
    with pytest.raises(ValueError):
        nx.as_matrix(np.zeros((0, 2)))


@given(complex_matrices(2, 5).filter(lambda m: m.shape[0] == m.shape[1]))
def test_eig_small_matches_scipy(m):
    ev = np.sort_complex(nx.eig_small(m))
    ref = np.sort_complex(scipy.linalg.eigvals(m))
    assert np.allclose(ev, ref, atol=1e-8 * max(1.0, np.abs(m).max()))


def test_generalized_eig_vectors():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    e = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    w, right, left = nx.generalized_eig(a, e)
    for i in range(4):
        assert np.allclose(a @ right[:, i], w[i] * e @ right[:, i], atol=1e-10)
        # plain transpose convention: p^T A = w p^T E
        assert np.allclose(left[:, i] @ a, w[i] * left[:, i] @ e, atol=1e-10)
        assert np.linalg.norm(right[:, i]) == pytest.approx(1.0)
        assert np.linalg.norm(left[:, i]) == pytest.approx(1.0)


def test_generalized_eig_refuses_singular_e():
    with pytest.raises(nx.NumericsError):
        nx.generalized_eig(np.eye(2), np.diag([1.0, 1e-14]))


def test_match_nearest_greedy_and_unique():
    ref = np.array([0.0, 1.0, 2.0])
    cand = np.array([2.1, 0.05, 0.9, 5.0])
    idx = nx.match_nearest(ref, cand)
    assert list(idx) == [1, 2, 0]


@given(st.lists(st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False), min_size=1, max_size=8, unique=True))
def test_match_nearest_identity_on_permutation(values):
    ref = np.array(values)
    perm = np.random.default_rng(0).permutation(ref.size)
    idx = nx.match_nearest(ref, ref[perm])
    assert np.array_equal(ref[perm][idx], ref)
