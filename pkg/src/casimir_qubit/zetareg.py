"""Zeta functions, Bernoulli polynomials, digamma and regularized mode sums.

Non-positive integer arguments of the Riemann and Hurwitz zeta functions
are evaluated exactly through Bernoulli polynomials in rational
arithmetic, so identities such as ``zeta_H(-2p, 1/2) = 0`` hold without
rounding. Everything else uses Euler-Maclaurin summation (20 direct terms,
10 correction terms).

Regularized-constant convention: a divergent fermionic Matsubara sum of a
constant, ``sum_{n in Z} 1``, is assigned ``2 zeta_H(0, 1/2) = 0``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (InvalidA, NonConvergent, OrderTooLarge, PoleAtNonPositiveInteger, PoleAtOne,
                     PoleDetected)
from .modes import BOSONIC, FERMIONIC, SlabGeometry

EULER_GAMMA = 0.57721566490153286060651209008240243

CLOSED_FORM = "closed_form"
ZETA_CONTINUATION = "zeta_continuation"
TRUNCATED_SUM = "truncated_sum"

SIGMA_ONE_FERMIONIC = "sum_n 1 -> 2 zeta_H(0, 1/2) = 0"

_EM_DIRECT = 20
_EM_CORRECTIONS = 10
_MAX_BERNOULLI = 60


@dataclass(frozen=True)
class RegularizedValue:
    value: complex | float
    scheme: str
    truncation_error: float = 0.0
    conventions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.truncation_error < 0:
            raise ValueError("truncation_error must be non-negative")
        if self.scheme == CLOSED_FORM and self.truncation_error != 0:
            raise ValueError("closed forms carry no truncation error")


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """``B_n`` with the ``B_1 = -1/2`` convention, exact."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > _MAX_BERNOULLI:
        raise OrderTooLarge(f"B_{n}: order above {_MAX_BERNOULLI}")
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def bernoulli_poly_exact(n: int, x: Fraction) -> Fraction:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > _MAX_BERNOULLI:
        raise OrderTooLarge(f"B_{n}(x): order above {_MAX_BERNOULLI}")
    return sum((math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)),
               Fraction(0))


def bernoulli_poly(n: int, x: float) -> float:
    """``B_n(x)`` evaluated exactly on the binary value of ``x``, then rounded once."""
    return float(bernoulli_poly_exact(n, Fraction(x)))


def _is_nonpositive_integer(s: float) -> bool:
    return s <= 0 and float(s).is_integer()


def _euler_maclaurin(s: float, a: float) -> float:
    N = _EM_DIRECT
    head = math.fsum((n + a) ** (-s) for n in range(N))
    x = N + a
    terms = [x ** (1 - s) / (s - 1), 0.5 * x ** (-s)]
    # rising factorial s (s+1) ... (s+2k-2)
    rising = s
    for k in range(1, _EM_CORRECTIONS + 1):
        b2k = float(bernoulli_number(2 * k))
        terms.append(b2k / math.factorial(2 * k) * rising * x ** (-s - 2 * k + 1))
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + math.fsum(terms)


def hurwitz_zeta(s: float, a: float) -> float:
    """Hurwitz zeta ``sum_{n>=0} (n + a)^-s`` and its continuation in ``s``.

    Non-positive integers use ``zeta_H(-n, a) = -B_{n+1}(a)/(n+1)``; other
    arguments use Euler-Maclaurin, accurate to ~1e-12 for ``s > -10``.
    """
    if not a > 0:
        raise InvalidA(f"a must be positive, got {a}")
    if s == 1:
        raise PoleAtOne("zeta_H(s, a) has a pole at s = 1")
    if _is_nonpositive_integer(s):
        n = int(-s)
        return float(-bernoulli_poly_exact(n + 1, Fraction(a)) / (n + 1))
    return _euler_maclaurin(s, a)


def riemann_zeta(s: float) -> float:
    """Riemann zeta for real ``s != 1``.

    Negative non-integers go through the functional equation.
    """
    if s == 1:
        raise PoleAtOne("zeta(s) has a pole at s = 1")
    if _is_nonpositive_integer(s):
        n = int(-s)
        return float(-bernoulli_number(n + 1) / (n + 1)) if n > 0 else -0.5
    if s < 0:
        return (2 ** s * math.pi ** (s - 1) * math.sin(math.pi * s / 2)
                * math.gamma(1 - s) * riemann_zeta(1 - s))
    return _euler_maclaurin(s, 1.0)


def digamma(s: float) -> float:
    """``psi(s)``: upward recurrence to ``s >= 10`` then the asymptotic series.

    Negative arguments use the reflection ``psi(1-s) - psi(s) = pi cot(pi s)``.
    """
    if _is_nonpositive_integer(s):
        raise PoleAtNonPositiveInteger(f"psi has a pole at s = {s}")
    if s < 0.5:
        return digamma(1 - s) - math.pi / math.tan(math.pi * s)
    shift = []
    while s < 10:
        shift.append(1.0 / s)
        s += 1
    inv2 = 1.0 / (s * s)
    series = [math.log(s), -0.5 / s]
    p = inv2
    for k in range(1, 9):
        series.append(-float(bernoulli_number(2 * k)) / (2 * k) * p)
        p *= inv2
    return math.fsum(series) - math.fsum(shift)


def _parity_factor(q: float) -> complex:
    """``1 + (-1)^(-q)``: pairs ``omega_n`` with ``-omega_n``."""
    if float(q).is_integer():
        return 2.0 if int(q) % 2 == 0 else 0.0
    return 1 + cmath.exp(-1j * math.pi * q)


def z_beta(q: float, beta: float, family: str = FERMIONIC) -> RegularizedValue:
    """``sum_{n in Z} omega_n^-q`` by zeta continuation.

    Fermionic: ``(beta/pi)^q 2^-q (1 + (-1)^-q) zeta_H(q, 1/2)``.
    Bosonic (``n = 0`` excluded): ``(beta/2pi)^q (1 + (-1)^-q) zeta(q)``.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if q == 1:
        raise PoleDetected(1.0, "sum_n omega_n^-1: zeta pole at q = 1")
    par = _parity_factor(q)
    if family == FERMIONIC:
        if par == 0:
            v = 0.0
        else:
            v = (beta / math.pi) ** q * 2.0 ** (-q) * par * hurwitz_zeta(q, 0.5)
        conv = (SIGMA_ONE_FERMIONIC,)
    elif family == BOSONIC:
        if q == 0:
            # sum over n != 0 of 1 -> 2 zeta(0)
            v = 2 * riemann_zeta(0.0)
        elif par == 0:
            v = 0.0
        else:
            v = (beta / (2 * math.pi)) ** q * par * riemann_zeta(q)
        conv = ("bosonic n = 0 excluded",)
    else:
        raise ValueError(f"unknown family {family!r}")
    if isinstance(v, complex) and v.imag == 0:
        v = v.real
    return RegularizedValue(v, ZETA_CONTINUATION, 0.0, conv)


def z_beta_truncated(q: float, beta: float, family: str = FERMIONIC,
                     nmax: int = 10**6) -> RegularizedValue:
    """Direct symmetric sum ``|n| <= nmax`` plus an integral tail estimate (``q > 1``)."""
    if q <= 1:
        raise ValueError("the direct Matsubara sum converges only for q > 1")
    import numpy as np

    if family == FERMIONIC:
        odd = 2 * np.arange(0, nmax + 1, dtype=np.float64) + 1
        w = odd * math.pi / beta
        step = 2 * math.pi / beta
    elif family == BOSONIC:
        w = 2 * math.pi * np.arange(1, nmax + 1, dtype=np.float64) / beta
        step = 2 * math.pi / beta
    else:
        raise ValueError(f"unknown family {family!r}")
    par = _parity_factor(q)
    body = math.fsum((w ** (-q)).tolist())
    # integral of x^-q over the region beyond the last frequency, per spacing
    w_end = w[-1] + step / 2
    tail = w_end ** (1 - q) / ((q - 1) * step)
    value = par * (body + tail)
    err = abs(par) * w[-1] ** (-q)
    if isinstance(value, complex) and value.imag == 0:
        value = value.real
    return RegularizedValue(value, TRUNCATED_SUM, err)


def z_spatial(q: float, geom: SlabGeometry) -> RegularizedValue:
    """Per-unit-area ``sum_k omega_k^-q`` for the massless Dirichlet slab.

    The transverse momenta are integrated in the continuum and the
    Dirichlet sum is continued: ``(pi/L)^(2-q) zeta(q-2) / (2 pi (q-2))``.
    """
    if geom.m != 0:
        raise ValueError("closed-form z_spatial needs m = 0; use z_spatial_truncated")
    if q == 2:
        raise PoleDetected(2.0, "transverse integral diverges at q = 2")
    if q == 3:
        raise PoleDetected(3.0, "zeta(q - 2) has its pole at q = 3")
    a = math.pi / geom.L
    v = a ** (2 - q) * riemann_zeta(q - 2) / (2 * math.pi * (q - 2))
    return RegularizedValue(v, ZETA_CONTINUATION, 0.0, ("transverse continuum, per unit area",))


def z_spatial_truncated(q: float, geom: SlabGeometry, jmax: int, kmax: int,
                        lmax: int) -> RegularizedValue:
    """Per-unit-area lattice sum over a finite window (any mass, ``q > 3``).

    The truncation error is a continuum estimate of the discarded shell.
    """
    if q <= 3:
        raise ValueError("the lattice sum converges only for q > 3")
    import numpy as np

    j = np.arange(-jmax, jmax + 1)[:, None, None]
    k = np.arange(-kmax, kmax + 1)[None, :, None]
    l = np.arange(1, lmax + 1)[None, None, :]
    w2 = ((2 * math.pi * j / geom.Lx) ** 2 + (2 * math.pi * k / geom.Ly) ** 2
          + (math.pi * l / geom.L) ** 2 + geom.m ** 2)
    total = math.fsum((w2 ** (-q / 2)).ravel().tolist()) / (geom.Lx * geom.Ly)
    # smallest momentum outside the box bounds the density of discarded states
    kmin = min(2 * math.pi * jmax / geom.Lx, 2 * math.pi * kmax / geom.Ly, math.pi * lmax / geom.L)
    density = geom.L / (2 * math.pi ** 2)  # half-space density per unit area
    err = 4 * math.pi * density * kmin ** (3 - q) / (q - 3)
    return RegularizedValue(total, TRUNCATED_SUM, err)


def _log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2 * x)) - math.log(2.0)


def matsubara_log_sum_truncated(omega: float, beta: float, nmax: int = 1000) -> float:
    """``sum_{n in Z} ln(1 + omega^2/omega_n^2)`` summed directly plus analytic tail.

    The tail ``n > nmax`` is expanded as ``sum_k (-1)^(k+1) c^k / k`` times
    Hurwitz sums of odd integers.
    """
    if omega == 0:
        return 0.0
    c = (beta * omega / math.pi) ** 2  # omega^2/omega_n^2 = c / (2n+1)^2
    body = [2 * math.log1p(c / (2 * n + 1) ** 2) for n in range(nmax + 1)]
    a = nmax + 1.5
    if c >= (2 * nmax + 3) ** 2:
        raise ValueError("nmax too small for the tail expansion")
    tail = []
    for k in range(1, 200):
        t = (-1) ** (k + 1) * c ** k / k * 4.0 ** (-k) * hurwitz_zeta(2 * k, a)
        tail.append(2 * t)
        if abs(t) < 1e-18 * max(1.0, abs(body[0])):
            break
    return math.fsum(body + tail)


def matsubara_log_sum(omega: float, beta: float, family: str = FERMIONIC,
                      tol: float = 1e-9) -> float:
    """Closed form ``2 ln cosh(beta omega / 2)``, cross-checked against the direct sum."""
    if family != FERMIONIC:
        raise ValueError("only the fermionic family has this closed form")
    if omega < 0 or beta <= 0:
        raise ValueError("need omega >= 0 and beta > 0")
    closed = 2 * _log_cosh(beta * omega / 2)
    direct = matsubara_log_sum_truncated(omega, beta)
    if abs(direct - closed) > tol * max(1.0, abs(closed)):
        raise NonConvergent(f"Matsubara closed form mismatch: {direct} vs {closed}")
    return closed


def regularized_matsubara_log(omega: float, beta: float) -> float:
    """Zeta-regularized ``sum_{n in Z} ln(omega_n^2 + omega^2)`` (fermionic).

    Equals ``2 ln(2 cosh(beta omega / 2)) = beta omega + 2 ln(1 + e^-beta omega)``.
    It differs from :func:`matsubara_log_sum` by the omega-independent
    ``sum_n ln omega_n^2 -> ln 4``.
    """
    x = beta * omega
    return x + 2 * math.log1p(math.exp(-x))
