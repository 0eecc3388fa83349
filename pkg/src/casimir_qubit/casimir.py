"""Parallel-plate Casimir energy: zeta continuation and an exponential-cutoff oracle.

Both pipelines return the energy per unit plate area for a massless field
with Dirichlet plates at separation ``L``. The cutoff oracle knows nothing
about zeta functions: it regulates the mode sum with ``exp(-delta omega)``,
subtracts the bulk (proportional to ``L``) and surface (``L``-independent)
divergences and extrapolates ``delta -> 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import zetareg
from .clifford import GammaBasis, dirac_basis, slash
from .errors import ExtrapolationUnstable, NonConvergent
from .modes import FourMomentum, SlabGeometry

SCALAR = "scalar_per_dof"
FERMION = "dirac_fermion"
ZETA = "zeta_closed"
CUTOFF = "cutoff_oracle"

# a Dirac fermion counts as two scalar degrees of freedom
_FIELD_FACTOR = {SCALAR: 1.0, FERMION: 2.0}

# regulator values in units of the plate separation
DEFAULT_DELTA_OVER_L = (0.2, 0.1, 0.05, 0.025)


@dataclass(frozen=True)
class CasimirResult:
    energy_per_area: float
    L: float
    field: str
    method: str
    uncertainty: float = 0.0
    details: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CutoffConfig:
    """Regulator grid for the cutoff oracle.

    ``delta_list`` holds absolute regulator lengths; when ``relative`` is
    set they are multiples of ``L`` instead.
    """

    delta_list: tuple[float, ...] = DEFAULT_DELTA_OVER_L
    relative: bool = True
    rel_unstable: float = 1e-2

    def __post_init__(self):
        d = self.delta_list
        if len(d) < 3:
            raise ValueError("need at least three regulator values")
        if any(x <= 0 for x in d) or any(b >= a for a, b in zip(d, d[1:])):
            raise ValueError("regulator values must be positive and strictly descending")

    def deltas(self, L: float) -> np.ndarray:
        d = np.asarray(self.delta_list, dtype=float)
        return d * L if self.relative else d


def _field_factor(fld: str) -> float:
    try:
        return _FIELD_FACTOR[fld]
    except KeyError:
        raise ValueError(f"unknown field {fld!r}") from None


def casimir_zeta(L: float, fld: str = SCALAR) -> CasimirResult:
    """Half the zeta-regularized sum of frequencies, per area and per dof.

    ``(1/2) Z(-1)/S`` with ``Z(-1)/S = -(pi/L)^3 zeta(-3) / (6 pi)``.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    z = zetareg.z_spatial(-1.0, SlabGeometry(L=L))
    e = 0.5 * z.value * _field_factor(fld)
    return CasimirResult(e, L, fld, ZETA, 0.0, {"zeta(-3)": zetareg.riemann_zeta(-3.0)})


def _geometric_sums(x: float) -> tuple[float, float, float]:
    """``sum_{l>=1} l^p e^{-x l}`` for p = 0, 1, 2."""
    q = math.exp(-x)
    d = -math.expm1(-x)  # 1 - q without cancellation
    return q / d, q / d ** 2, q * (1 + q) / d ** 3


def regulated_energy(delta: float, L: float) -> tuple[float, float, float]:
    """Cutoff-regulated energy per area with its bulk and surface pieces.

    Per Dirichlet level ``a = pi l / L`` the transverse integral of
    ``(1/2) omega e^{-delta omega}`` is ``(1/4pi)(a^2/delta + 2a/delta^2 + 2/delta^3) e^{-delta a}``.
    Returns ``(total, bulk, surface)``: ``bulk`` replaces the ``l`` sum by
    ``(L/pi) int_0^inf da``, ``surface`` is minus half the ``a = 0`` value.
    """
    a = math.pi / L
    s0, s1, s2 = _geometric_sums(delta * a)
    total = (a * a * s2 / delta + 2 * a * s1 / delta ** 2 + 2 * s0 / delta ** 3) / (4 * math.pi)
    # int_0^inf (a^2/d + 2a/d^2 + 2/d^3) e^{-d a} da = 6/d^4
    bulk = (L / math.pi) * 6.0 / delta ** 4 / (4 * math.pi)
    surface = -0.5 * (2.0 / delta ** 3) / (4 * math.pi)
    return total, bulk, surface


def subtracted_energy(delta: float, L: float) -> float:
    total, bulk, surface = regulated_energy(delta, L)
    return total - bulk - surface


def casimir_cutoff_oracle(L: float, cfg: CutoffConfig | None = None,
                          fld: str = SCALAR) -> CasimirResult:
    """Exponential-cutoff estimate extrapolated with ``c0 + c2 delta^2``.

    Raises
    ------
    ExtrapolationUnstable
        When dropping the largest regulator moves ``c0`` by more than
        ``cfg.rel_unstable`` relative.
    """
    if not L > 0:
        raise ValueError("L must be positive")
    cfg = cfg or CutoffConfig()
    ds = cfg.deltas(L)
    ys = np.array([subtracted_energy(d, L) for d in ds])
    c0, c2, resid = _fit(ds, ys)
    c0_sub, _, _ = _fit(ds[1:], ys[1:])
    shift = abs(c0 - c0_sub)
    if not shift <= cfg.rel_unstable * abs(c0):
        raise ExtrapolationUnstable(
            f"dropping delta = {ds[0]:.3g} moves the limit by {shift:.3e} (limit {c0:.6e})")
    f = _field_factor(fld)
    details = {"deltas": ds.tolist(), "subtracted": ys.tolist(), "c2": c2,
               "fit_residual": resid, "drop_one_shift": shift}
    return CasimirResult(c0 * f, L, fld, CUTOFF, max(resid, shift) * f, details)


def _fit(ds: np.ndarray, ys: np.ndarray) -> tuple[float, float, float]:
    """Least-squares ``c0 + c2 delta^2``; returns ``(c0, c2, max residual)``."""
    A = np.vstack([np.ones_like(ds), ds ** 2]).T
    (c0, c2), *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = float(np.abs(ys - A @ np.array([c0, c2])).max())
    return float(c0), float(c2), resid


def effective_energy(ec: CasimirResult, C2: float = 0.0, ell: float = 1.0) -> float:
    """Energy plus the heat-kernel ambiguity ``C2 (psi(1) - psi(-1/2)) / (32 pi^2 ell)``."""
    if not ell > 0:
        raise ValueError("ell must be positive")
    if C2 == 0:
        return ec.energy_per_area
    corr = C2 * (zetareg.digamma(1.0) - zetareg.digamma(-0.5)) / (32 * math.pi ** 2 * ell)
    return ec.energy_per_area + corr


def slp_mode_check(p: FourMomentum, basis: GammaBasis | None = None,
                   m: float | None = None) -> tuple[complex, complex]:
    """Per-mode determinant identity between the scalar block and the Dirac operator.

    ``lhs = (omega_n^2 + omega_k^2)^4`` (four copies of the scalar operator),
    ``rhs = det(kslash + m)^2`` from the explicit 4x4 matrix.
    """
    basis = basis or dirac_basis()
    m = p.m if m is None else m
    k2 = sum(x * x for x in p.kvec)
    lhs = (-(p.k0 ** 2) + k2 + m * m) ** 4
    d = complex(np.linalg.det(slash(p, basis) + m * np.eye(4)))
    return complex(lhs), d * d


def zeta_factorization_check(s: float, spectrum, beta: float = math.inf) -> tuple[float, float]:
    """Continuum-time factorization of a product spectral zeta function.

    ``lhs = int domega/2pi sum_lambda (omega^2 + lambda)^-s`` by quadrature,
    ``rhs = Gamma(s - 1/2) / (Gamma(s) sqrt(4 pi)) sum_lambda lambda^(1/2 - s)``.
    With finite ``beta`` the integral becomes the bosonic Matsubara sum
    ``(1/beta) sum_n``, which tends to the same value as ``beta`` grows.
    """
    lam = np.asarray(spectrum, dtype=float)
    if s <= 1 or np.any(lam <= 0):
        raise NonConvergent("need s > 1 and a positive spectrum")
    rhs = math.gamma(s - 0.5) / (math.gamma(s) * math.sqrt(4 * math.pi)) * math.fsum(
        (lam ** (0.5 - s)).tolist())
    if math.isinf(beta):
        parts = []
        for x in lam:
            v, err = integrate.quad(lambda w: (w * w + x) ** (-s), 0, np.inf,
                                    epsabs=0, epsrel=1e-13, limit=200)
            if err > 1e-10 * abs(v):
                raise NonConvergent(f"quadrature error {err:.2e}")
            parts.append(2 * v / (2 * math.pi))
        lhs = math.fsum(parts)
    else:
        n = np.arange(-200000, 200001)
        w2 = (2 * math.pi * n / beta) ** 2
        lhs = math.fsum(math.fsum(((w2 + x) ** (-s)).tolist()) / beta for x in lam)
    return lhs, rhs
