import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from casimir_qubit import complexlinalg as cl
from casimir_qubit.errors import BranchCutEigenvalue, LogOfSingular, NonDiagonalizable

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
mat4 = arrays(np.float64, (2, 4, 4), elements=finite).map(lambda a: a[0] + 1j * a[1])


def test_mat_mul_diagonal():
    a = np.diag([1, 2, 3, 4])
    b = np.diag([4, 3, 2, 1])
    assert np.array_equal(cl.mat_mul(a, b), np.diag([4, 6, 6, 4]))


def test_as_matrix_rejects_non_square():
    with pytest.raises(ValueError):
        cl.as_matrix(np.zeros((2, 3)))


def test_det_and_trace_of_identity():
    assert cl.det(cl.identity()) == 1
    assert cl.trace(cl.identity()) == 4


def test_eigen_degenerate_clusters():
    # two doubly degenerate eigenvalues after a random similarity transform
    rng = np.random.default_rng(1)
    v = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    d = np.diag([0.25 + 0.5j, 0.25 + 0.5j, 0.25 - 0.5j, 0.25 - 0.5j])
    m = v @ d @ np.linalg.inv(v)
    es = cl.eigen(m)
    assert es.multiplicities == (2, 2)
    assert es.values[0].imag < 0
    assert es.residual(m) < 1e-10
    for lam, k, basis in es.clusters():
        assert basis.shape == (4, k)
        assert np.linalg.norm(m @ basis - lam * basis) < 1e-10


def test_eigen_rejects_jordan_block():
    j = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]], dtype=complex)
    with pytest.raises(NonDiagonalizable):
        cl.eigen(j)


@given(mat4)
@settings(max_examples=60, deadline=None)
def test_eigen_reconstructs_generic_matrices(m):
    try:
        es = cl.eigen(m)
    except NonDiagonalizable:
        return  # numerically defective draws are allowed to refuse
    scale = max(1.0, np.linalg.norm(m, 2))
    assert es.residual(m) < 1e-8 * scale


def test_principal_log_branch():
    assert cl.principal_log(1j) == pytest.approx(1j * cmath.pi / 2)
    with pytest.raises(LogOfSingular):
        cl.principal_log(0.0)
    with pytest.raises(BranchCutEigenvalue):
        cl.principal_log(-2.0)


def test_log_exp_roundtrip():
    rng = np.random.default_rng(3)
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 0.3 * (h + h.conj().T)
    e = cl.mat_exp(h)
    assert np.allclose(cl.mat_log(e), h, atol=1e-12)


def test_mat_exp_matches_scipy():
    from scipy.linalg import expm

    rng = np.random.default_rng(4)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(cl.mat_exp(m), expm(m), atol=1e-10)


def test_svd_reconstruction():
    rng = np.random.default_rng(5)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    s = cl.svd4(m)
    assert np.all(np.diff(s.singular_values) <= 0)
    assert np.allclose(s.reconstruct(), m, atol=1e-13)


def test_partial_trace_of_product():
    a = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    b = np.array([[0.2, 0.4], [0.4, 0.8]])
    m = np.kron(a, b)
    assert np.allclose(cl.partial_trace(m, "first"), np.trace(a) * b)
    assert np.allclose(cl.partial_trace(m, "second"), np.trace(b) * a)


def test_partial_trace_rejects_unknown_selector():
    with pytest.raises(ValueError):
        cl.partial_trace(np.eye(4), "third")


@given(mat4, mat4, finite)
@settings(max_examples=50, deadline=None)
def test_partial_trace_linear_and_trace_preserving(a, b, c):
    for which in ("first", "second"):
        lhs = cl.partial_trace(a + c * b, which)
        rhs = cl.partial_trace(a, which) + c * cl.partial_trace(b, which)
        assert np.allclose(lhs, rhs, atol=1e-9 * (1 + abs(c)) * 40)
        assert cl.trace(cl.partial_trace(a, which)) == pytest.approx(cl.trace(a), abs=1e-9)
