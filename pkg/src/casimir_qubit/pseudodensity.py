"""Per-mode pseudo-density matrices of the fermionic vacuum fluctuations.

For a Euclidean momentum ``k = (i*omega_n, kvec)`` the matrix

    rho = (kslash + m) gamma^0 / (4 k0) = (I + chi B) / 4,
    chi = omega_k / k0,   B = (m - k_i gamma^i) gamma^0 / (k0 chi)

has unit trace, eigenvalues ``(1 +- chi)/4`` (each twice) and is
pseudo-hermitian with respect to ``gamma^1 gamma^2 gamma^3``. Since ``chi``
is imaginary on the slab, ``rho`` is normal but neither hermitian nor
positive.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import complexlinalg as cl
from .clifford import GammaBasis, basis_state, dirac_basis, slash, spatial_dot
from .errors import ArtanhPole, DecompositionFailure, MasslessSpinor, SingularRho, ZeroChi
from .modes import FourMomentum, Mode

_CHI_TOL = 1e-14


@dataclass(frozen=True)
class PseudoDensity:
    rho: np.ndarray
    chi: complex
    lambda_plus: complex
    lambda_minus: complex
    mode: Mode | None = None
    # entrywise gap between the two constructions, relative to max(1, |rho|)
    construction_residual: float = field(default=0.0, compare=False)

    @property
    def eigenvalues(self) -> tuple[complex, complex, complex, complex]:
        return (self.lambda_plus, self.lambda_plus, self.lambda_minus, self.lambda_minus)


@dataclass(frozen=True)
class ThermalForm:
    A: complex
    alpha: complex
    beta_check: complex
    H: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """``exp(-beta_check H) / tr exp(-beta_check H)``."""
        e = cl.mat_exp(-self.beta_check * self.H)
        return e / cl.trace(e)


@dataclass(frozen=True)
class SpinorQuartet:
    """Boosted spinors keyed by ``(lambda_E, lambda_s)``.

    ``eigenvalue_of`` records which eigenvalue of rho each spinor was found
    to carry, ``residuals`` the matching ``|rho psi - lambda psi|``.
    """

    spinors: dict[tuple[int, int], np.ndarray]
    eigenvalue_of: dict[tuple[int, int], complex]
    residuals: dict[tuple[int, int], float]


def build_B(p: FourMomentum, basis: GammaBasis | None = None) -> np.ndarray:
    basis = basis or dirac_basis()
    denom = p.k0 * p.chi  # = omega_k
    if abs(p.chi) < _CHI_TOL or abs(denom) < _CHI_TOL:
        raise ZeroChi("chi = 0: B is undefined (omega_k = 0)")
    return (p.m * cl.identity() - spatial_dot(p.kvec, basis)) @ basis.gamma0 / denom


def pseudo_density_from_chi(chi: complex, B: np.ndarray | None = None) -> PseudoDensity:
    """``(I + chi B)/4`` for an arbitrary involution ``B`` (default ``gamma^0``).

    Used for off-slab test points such as ``chi = 0``.
    """
    B = dirac_basis().gamma0 if B is None else cl.as_matrix(B)
    chi = complex(chi)
    rho = (cl.identity() + chi * B) / 4
    return PseudoDensity(rho, chi, (1 + chi) / 4, (1 - chi) / 4)


def build_rho(p: FourMomentum, basis: GammaBasis | None = None) -> PseudoDensity:
    """Pseudo-density matrix of one mode, cross-checked between both forms."""
    basis = basis or dirac_basis()
    direct = (slash(p, basis) + p.m * cl.identity()) @ basis.gamma0 / (4 * p.k0)
    via_B = (cl.identity() + p.chi * build_B(p, basis)) / 4
    scale = max(1.0, float(np.abs(direct).max()))
    gap = float(np.abs(direct - via_B).max()) / scale
    return PseudoDensity(direct, p.chi, (1 + p.chi) / 4, (1 - p.chi) / 4, p.mode, gap)


def purity(rho: PseudoDensity) -> complex:
    """``tr(rho^2)``; equals ``(1 - omega_k^2/omega_n^2)/4`` on the slab."""
    return cl.trace(rho.rho @ rho.rho)


def thermal_decompose(rho: PseudoDensity, p: FourMomentum,
                      basis: GammaBasis | None = None) -> ThermalForm:
    """Write rho as a Gibbs state of ``H = (k_i gamma^i - m) gamma^0 / chi``.

    Parameters
    ----------
    rho : PseudoDensity
        Must come from ``p`` (only its ``chi`` is used).
    p : FourMomentum
    basis : GammaBasis, optional

    Returns
    -------
    ThermalForm
        ``alpha = artanh(chi)`` (principal branch), ``A = sqrt(1 - chi^2)/4``,
        pseudo inverse temperature ``beta_check = alpha / k0`` and ``H``.
    """
    basis = basis or dirac_basis()
    chi = rho.chi
    if abs(chi - 1) < _CHI_TOL or abs(chi + 1) < _CHI_TOL:
        raise ArtanhPole(f"chi = {chi} sits on the artanh pole")
    if abs(chi) < _CHI_TOL:
        raise ZeroChi("chi = 0: the modulated Hamiltonian is undefined")
    alpha = 0.5 * cmath.log((1 + chi) / (1 - chi))
    A = cmath.sqrt(1 - chi * chi) / 4
    H = (spatial_dot(p.kvec, basis) - p.m * cl.identity()) @ basis.gamma0 / chi
    return ThermalForm(A, alpha, alpha / p.k0, H)


def boosted_spinors(p: FourMomentum, basis: GammaBasis | None = None) -> SpinorQuartet:
    """Rest-frame basis states boosted along ``+-kvec``.

    ``psi = sqrt(m/omega) S |lambda_E, lambda_s>`` with
    ``S = ((omega + m) I - (-1)^lambda_E k_i gamma^i gamma_0) / sqrt(2 m (omega + m))``.
    The eigenvalue paired with each energy label is found by residual
    minimization rather than assumed.
    """
    basis = basis or dirac_basis()
    if p.m <= 0:
        raise MasslessSpinor("boosted spinors need m > 0")
    w, m = p.omega_k, p.m
    K = spatial_dot(p.kvec, basis) @ basis.gamma0
    lam = {+1: (1 + p.chi) / 4, -1: (1 - p.chi) / 4}
    rho = build_rho(p, basis).rho

    spinors, residuals, assigned = {}, {}, {}
    for e in (0, 1):
        S = ((w + m) * cl.identity() - (-1) ** e * K) / math.sqrt(2 * m * (w + m))
        for s in (0, 1):
            psi = math.sqrt(m / w) * S @ basis_state(e, s)
            r = {sgn: float(np.linalg.norm(rho @ psi - lam[sgn] * psi)) for sgn in (+1, -1)}
            pick = min(r, key=r.get)
            spinors[(e, s)] = psi
            residuals[(e, s)] = r[pick]
            assigned[(e, s)] = lam[pick]
    return SpinorQuartet(spinors, assigned, residuals)


def realigned(rho: np.ndarray) -> np.ndarray:
    """``R[2i+k, 2j+l] = <i,j|rho|k,l>``; rank one iff rho is a single product."""
    t = cl.as_matrix(rho).reshape(2, 2, 2, 2)  # t[i, j, k, l]
    return t.transpose(0, 2, 1, 3).reshape(4, 4)


def realignment_spectrum(rho: PseudoDensity | np.ndarray) -> np.ndarray:
    m = rho.rho if isinstance(rho, PseudoDensity) else rho
    return cl.svd4(realigned(m)).singular_values


def realignment_rank(rho: PseudoDensity | np.ndarray, tol: float = 1e-10) -> int:
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = realignment_spectrum(rho)
    return int(np.sum(s > tol * s[0]))


@dataclass(frozen=True)
class ProductTerm:
    weight: complex
    factor1: np.ndarray
    factor2: np.ndarray
    trace_normalized: bool

    def matrix(self) -> np.ndarray:
        return self.weight * np.kron(self.factor1, self.factor2)


def _rank_one_pieces(f: np.ndarray, rel_tol: float = 1e-14) -> list[np.ndarray]:
    u, s, vh = np.linalg.svd(f)
    return [s[i] * np.outer(u[:, i], vh[i]) for i in range(len(s)) if s[i] > rel_tol * s[0]]


def _normalize(f: np.ndarray, tol: float = 1e-12) -> tuple[complex, np.ndarray, bool]:
    tr = complex(np.trace(f))
    norm = float(np.linalg.norm(f))
    if abs(tr) > tol * norm:
        return tr, f / tr, True
    return complex(norm), f / norm, False


def product_decomposition(rho: PseudoDensity | np.ndarray, *, tol: float = cl.SPEC_TOL,
                          schmidt_tol: float = 1e-12) -> list[ProductTerm]:
    """Rank-one product terms summing to rho.

    Operator-Schmidt terms come from the SVD of the realigned matrix; each
    2x2 factor is split into at most two rank-one pieces. Factors with a
    non-zero trace are rescaled to unit trace (the weight carries the trace
    product); traceless factors keep unit Frobenius norm. Because
    ``tr(a (x) b) = tr a tr b``, the weights of the fully trace-normalized
    terms sum to ``tr rho``.

    Raises
    ------
    DecompositionFailure
        If the terms fail to reproduce rho to ``tol``.
    """
    m = rho.rho if isinstance(rho, PseudoDensity) else cl.as_matrix(rho)
    sv = cl.svd4(realigned(m))
    s = sv.singular_values
    terms = []
    for r in range(4):
        if s[r] <= schmidt_tol * s[0]:
            continue
        U = sv.u[:, r].reshape(2, 2)
        W = sv.v[:, r].conj().reshape(2, 2)
        for a in _rank_one_pieces(U):
            for b in _rank_one_pieces(W):
                ta, fa, na = _normalize(a)
                tb, fb, nb = _normalize(b)
                terms.append(ProductTerm(s[r] * ta * tb, fa, fb, na and nb))
    recon = sum(t.matrix() for t in terms)
    res = float(np.abs(recon - m).max())
    if res > tol * max(1.0, float(np.abs(m).max())):
        raise DecompositionFailure(f"reconstruction residual {res:.3e}")
    return terms


def weight_sum(terms: list[ProductTerm]) -> complex:
    return sum((t.weight for t in terms if t.trace_normalized), 0j)


def _eig_log_terms(rho: PseudoDensity) -> tuple[complex, complex]:
    lp = cl.principal_log(rho.lambda_plus)
    lm = cl.principal_log(rho.lambda_minus)
    return lp, lm


def von_neumann_entropy(rho: PseudoDensity) -> complex:
    """``-tr(rho ln rho)`` from the doubly degenerate spectrum, principal logs."""
    lp, lm = _eig_log_terms(rho)
    return -(2 * rho.lambda_plus * lp + 2 * rho.lambda_minus * lm)


def von_neumann_entropy_matrix(m: np.ndarray) -> complex:
    """Same functional through the matrix logarithm (independent path)."""
    m = cl.as_matrix(m)
    return -cl.trace(m @ cl.mat_log(m))


def conditional_entropy(rho: PseudoDensity, traced: str = "first") -> complex:
    """``S(rho) - S(tr_A rho)``; tracing out the energy qubit (``"first"``) leaves ``I/2``."""
    reduced = cl.partial_trace(rho.rho, traced)
    return von_neumann_entropy(rho) + cl.trace(reduced @ cl.mat_log(reduced))


def log_det_rho(rho: PseudoDensity) -> complex:
    """``ln det rho`` defined as the sum of principal eigenvalue logs."""
    if min(abs(rho.lambda_plus), abs(rho.lambda_minus)) < 1e-14:
        raise SingularRho("rho has a vanishing eigenvalue")
    lp, lm = _eig_log_terms(rho)
    return 2 * lp + 2 * lm
