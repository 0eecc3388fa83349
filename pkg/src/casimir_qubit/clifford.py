"""Dirac-representation gamma matrices and two-qubit basis conventions.

Qubit ordering: the basis state ``|i,j>`` sits at index ``2*i + j``. The
first qubit is the sign of the energy (upper/lower Dirac block) and the
second one is the spin, so rest-frame spinors are computational-basis vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
I2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class GammaBasis:
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    metric_B: np.ndarray
    metric_B_inv: np.ndarray
    signature: tuple[int, int, int, int] = (1, -1, -1, -1)

    @property
    def gamma0(self) -> np.ndarray:
        return self.gamma[0]

    @property
    def spatial(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.gamma[1], self.gamma[2], self.gamma[3]


@lru_cache(maxsize=None)
def dirac_basis() -> GammaBasis:
    z = np.zeros((2, 2), dtype=np.complex128)
    g0 = np.block([[I2, z], [z, -I2]])
    gi = tuple(np.block([[z, s], [-s, z]]) for s in PAULI)
    gammas = (g0, *gi)
    for g in gammas:
        g.setflags(write=False)
    metric = gi[0] @ gi[1] @ gi[2]
    metric_inv = np.linalg.inv(metric)
    metric.setflags(write=False)
    metric_inv.setflags(write=False)
    return GammaBasis(gammas, metric, metric_inv)


def spatial_dot(kvec, basis: GammaBasis) -> np.ndarray:
    """``k_i gamma^i`` with the spatial components taken as given."""
    kx, ky, kz = kvec
    g1, g2, g3 = basis.spatial
    return kx * g1 + ky * g2 + kz * g3


def slash(k, basis: GammaBasis | None = None) -> np.ndarray:
    """Feynman slash ``k0 gamma^0 - k_i gamma^i`` of a four-momentum.

    ``k`` is anything with ``k0`` and ``kvec`` attributes (normally a
    :class:`~casimir_qubit.modes.FourMomentum`, where ``k0 = i*omega_n``).
    """
    basis = basis or dirac_basis()
    return k.k0 * basis.gamma0 - spatial_dot(k.kvec, basis)


def basis_state(i: int, j: int) -> np.ndarray:
    if i not in (0, 1) or j not in (0, 1):
        raise ValueError("qubit labels must be 0 or 1")
    v = np.zeros(4, dtype=np.complex128)
    v[2 * i + j] = 1.0
    return v
