import numpy as np
import pytest

from casimir_qubit import complexlinalg as cl
from casimir_qubit.clifford import ETA, PAULI, basis_state, dirac_basis, slash
from casimir_qubit.modes import FourMomentum


def test_anticommutators_match_metric():
    b = dirac_basis()
    for m in range(4):
        for n in range(4):
            ac = cl.anticommutator(b.gamma[m], b.gamma[n])
            assert np.array_equal(ac, 2 * ETA[m, n] * np.eye(4))


def test_hermiticity_pattern():
    b = dirac_basis()
    assert np.array_equal(b.gamma0.conj().T, b.gamma0)
    for g in b.spatial:
        assert np.array_equal(g.conj().T, -g)


def test_traces_vanish():
    b = dirac_basis()
    for g in b.gamma:
        assert np.trace(g) == 0
    for g in b.spatial:
        assert np.trace(g @ b.gamma0) == 0


def test_metric_operator():
    b = dirac_basis()
    g1, g2, g3 = b.spatial
    assert np.array_equal(b.metric_B, g1 @ g2 @ g3)
    assert np.allclose(b.metric_B @ b.metric_B_inv, np.eye(4))


def test_gamma0_is_energy_qubit_z():
    assert np.array_equal(dirac_basis().gamma0, np.kron(np.diag([1, -1]), np.eye(2)))


def test_spatial_gammas_as_qubit_operators():
    # gamma^i = (i Y) (x) sigma_i in the (energy, spin) ordering
    iy = np.array([[0, 1], [-1, 0]])
    for g, s in zip(dirac_basis().spatial, PAULI):
        assert np.array_equal(g, np.kron(iy, s))


def test_basis_is_immutable_and_cached():
    b = dirac_basis()
    assert b is dirac_basis()
    with pytest.raises(ValueError):
        b.gamma0[0, 0] = 2


def test_slash_squares_to_invariant():
    p = FourMomentum.from_components(2.0j, (0.3, -1.1, 0.7))
    k2 = p.k0 ** 2 - sum(x * x for x in p.kvec)
    ks = slash(p)
    assert np.allclose(ks @ ks, k2 * np.eye(4), atol=1e-14)


def test_basis_state_index():
    assert basis_state(1, 0)[2] == 1
    with pytest.raises(ValueError):
        basis_state(2, 0)
