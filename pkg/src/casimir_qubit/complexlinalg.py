"""Dense complex linear algebra for 4x4 (and 2x2) matrices.

Matrices are plain ``numpy`` complex128 arrays; scalars are Python ``complex``.
Spectral functions (``mat_log``, ``mat_exp``) go through an explicit
eigendecomposition so that branch choices and degenerate eigenspaces are
under our control rather than hidden inside a Pade/Schur routine.
"""
from __future__ import annotations

import cmath
import functools
from dataclasses import dataclass

import numpy as np

from .errors import BranchCutEigenvalue, LogOfSingular, NonDiagonalizable

ALG_TOL = 1e-12   # exact algebraic identities
SPEC_TOL = 1e-10  # spectral reconstructions

# eigenvalues closer than this (relative to the matrix norm) are one cluster
_CLUSTER_TOL = 1e-8


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def identity(n: int = 4) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def mat_mul(a, b) -> np.ndarray:
    return as_matrix(a) @ as_matrix(b)


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def det(m) -> complex:
    return complex(np.linalg.det(as_matrix(m)))


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def spectral_norm(m) -> float:
    return float(np.linalg.norm(as_matrix(m), 2))


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b + b @ a


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (repeated by multiplicity) and matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray
    multiplicities: tuple[int, ...]

    def clusters(self) -> list[tuple[complex, int, np.ndarray]]:
        """Distinct eigenvalues with multiplicity and an eigenspace basis."""
        out = []
        start = 0
        for k in self.multiplicities:
            out.append((complex(self.values[start]), k, self.vectors[:, start:start + k]))
            start += k
        return out

    def residual(self, m) -> float:
        m = as_matrix(m)
        return float(np.linalg.norm(m @ self.vectors - self.vectors * self.values, 2))


def _compare(tol):
    def cmp(x, y):
        if abs(x.real - y.real) > tol:
            return -1 if x.real < y.real else 1
        if abs(x.imag - y.imag) > tol:
            return -1 if x.imag < y.imag else 1
        return 0
    return cmp


def eigen(m) -> EigenSystem:
    """Eigendecomposition with explicit handling of degenerate eigenvalues.

    Eigenvalues come from LAPACK; nearby eigenvalues are merged into clusters
    and each cluster's eigenspace is extracted as the numerical null space of
    ``m - lambda I`` (via SVD), which yields a well-conditioned basis for
    structurally repeated eigenvalues. Clusters are ordered by real part,
    then imaginary part.

    Raises
    ------
    NonDiagonalizable
        If the eigenspaces do not span the full space, or the reconstruction
        ``V diag(lambda) V^-1`` misses ``m`` by more than ``SPEC_TOL``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    scale = max(spectral_norm(m), 1.0)
    raw = np.linalg.eigvals(m)

    groups: list[list[complex]] = []
    for lam in raw:
        for g in groups:
            if abs(lam - g[0]) <= _CLUSTER_TOL * scale:
                g.append(complex(lam))
                break
        else:
            groups.append([complex(lam)])
    centers = [(complex(np.mean(g)), len(g)) for g in groups]
    key = functools.cmp_to_key(_compare(_CLUSTER_TOL * scale))
    centers.sort(key=lambda c: key(c[0]))

    values, vectors, mults = [], [], []
    eye = np.eye(n)
    for lam, k in centers:
        _, s, vh = np.linalg.svd(m - lam * eye)
        basis = vh[n - k:].conj().T
        res = float(np.linalg.norm((m - lam * eye) @ basis, 2))
        if res > SPEC_TOL * scale:
            raise NonDiagonalizable(res, f"eigenspace of {lam:.6g} has residual {res:.3e}")
        values.extend([lam] * k)
        vectors.append(basis)
        mults.append(k)
    v = np.hstack(vectors)
    vals = np.array(values, dtype=np.complex128)
    if np.linalg.matrix_rank(v, tol=1e-10) < n:
        raise NonDiagonalizable(float("inf"), "eigenvectors do not span the space")
    recon = v @ np.diag(vals) @ np.linalg.inv(v)
    res = float(np.linalg.norm(recon - m, 2))
    if res > SPEC_TOL * scale:
        raise NonDiagonalizable(res)
    return EigenSystem(vals, v, tuple(mults))


def _spectral_apply(es: EigenSystem, f) -> np.ndarray:
    fv = np.array([f(complex(x)) for x in es.values], dtype=np.complex128)
    v = es.vectors
    return v @ np.diag(fv) @ np.linalg.inv(v)


def principal_log(z: complex, tol: float = 1e-14) -> complex:
    """Scalar principal log, refusing zero and the negative real axis."""
    if abs(z) < tol:
        raise LogOfSingular(f"log of |z| = {abs(z):.3e}")
    if z.real < 0 and abs(z.imag) <= tol * abs(z):
        raise BranchCutEigenvalue(f"{z} lies on the branch cut")
    return cmath.log(z)


def mat_log(m) -> np.ndarray:
    """Principal matrix logarithm; no eigenvalue may lie on (-inf, 0]."""
    es = eigen(m)
    return _spectral_apply(es, principal_log)


def mat_exp(m) -> np.ndarray:
    return _spectral_apply(eigen(m), cmath.exp)


@dataclass(frozen=True)
class SVD:
    singular_values: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.u @ np.diag(self.singular_values) @ self.v.conj().T


def svd4(m) -> SVD:
    """Singular values in descending order with ``m = U diag(s) V^dagger``."""
    u, s, vh = np.linalg.svd(as_matrix(m))
    return SVD(s, u, vh.conj().T)


def partial_trace(m, which: str = "first") -> np.ndarray:
    """Trace out one qubit of a two-qubit operator in the ``|i,j>`` basis.

    ``which="first"`` contracts the first index (``sum_i <i,j|m|i,l>``),
    ``which="second"`` the second one.
    """
    t = as_matrix(m).reshape(2, 2, 2, 2)
    if which == "first":
        return np.einsum("ijil->jl", t)
    if which == "second":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"which must be 'first' or 'second', got {which!r}")
