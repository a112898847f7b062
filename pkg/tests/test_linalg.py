import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropeig import linalg


def _rand(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _sorted_close(a, b, tol):
    """Multiset comparison of complex vectors by greedy nearest matching."""
    b = list(b)
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        if abs(z - b[k]) > tol * max(1.0, abs(z)):
            return False
        b.pop(k)
    return not b


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(3, 9), st.data())
def test_schur_quotient_identity(seed, n, data):
    rng = np.random.default_rng(seed)
    a = _rand(rng, n)
    idx = data.draw(st.permutations(range(n)))
    k1 = data.draw(st.integers(1, n - 2))
    k2 = data.draw(st.integers(1, n - 1 - k1))
    C1, C2 = sorted(idx[:k1]), sorted(idx[k1 : k1 + k2])
    lhs, N = linalg.schur_complement(C1 + C2, a)
    s1, N1 = linalg.schur_complement(C2, a)
    pos = {p: k for k, p in enumerate(N1)}
    rhs, N2 = linalg.schur_complement([pos[c] for c in C1], s1)
    assert tuple(N1[k] for k in N2) == N
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * np.abs(lhs).max())


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_trace_and_determinant(seed, n):
    a = _rand(np.random.default_rng(seed), n)
    ev = linalg.eigenvalues(a)
    assert abs(ev.sum() - np.trace(a)) <= 1e-7 * max(1.0, np.abs(a).sum())
    det = np.linalg.det(a)
    assert abs(np.prod(ev) - det) <= 1e-7 * abs(det)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_transpose_has_same_spectrum(seed, n):
    a = _rand(np.random.default_rng(seed), n)
    assert _sorted_close(linalg.eigenvalues(a), linalg.eigenvalues(a.T), 1e-8)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 15))
def test_poly_roots_reconstruct_coefficients(seed, deg):
    rng = np.random.default_rng(seed)
    p = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    r = linalg.poly_roots(p)
    rebuilt = np.poly(r)[::-1] * p[-1]
    assert np.allclose(rebuilt, p, rtol=1e-7, atol=1e-7 * np.abs(p).max())


def test_pivot_ratio_detects_singularity():
    assert linalg.pivot_ratio(np.eye(3)) == 1.0
    assert linalg.pivot_ratio(np.zeros((2, 2))) == 0.0
    assert not linalg.is_invertible(np.array([[1, 2], [2, 4]]))
    with pytest.raises(linalg.SingularBlock):
        linalg.schur_complement([0, 1], np.array([[1, 2, 0], [2, 4, 0], [0, 0, 1]]))


def test_schur_complement_of_everything_is_empty():
    s, N = linalg.schur_complement([0, 1], np.eye(2))
    assert s.shape == (0, 0) and N == ()


def test_nullspace_vector():
    m = np.array([[1, -1], [2, -2]], dtype=complex)
    v = linalg.nullspace_vector(m)
    assert np.allclose(m @ v, 0)
    with pytest.raises(linalg.RankError):
        linalg.nullspace_vector(np.eye(2))
    with pytest.raises(linalg.RankError):
        linalg.nullspace_vector(np.zeros((2, 2)))


def test_bad_shapes_rejected():
    with pytest.raises(ValueError):
        linalg.eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        linalg.eigenvalues(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        linalg.poly_roots([1, 0])
