"""Slab geometry, quantized momenta and Matsubara frequencies.

Units: hbar = c = 1, every length (including the inverse temperature
``beta``) in the same unit. The plates sit at z = 0 and z = L with
Dirichlet conditions (``k_z = pi*l/L``, ``l >= 1``); the transverse
directions are periodic with periods ``Lx``, ``Ly``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import InvalidMode

FERMIONIC = "fermionic"
BOSONIC = "bosonic"


@dataclass(frozen=True)
class SlabGeometry:
    Lx: float = 1.0
    Ly: float = 1.0
    L: float = 1.0
    beta: float = 1.0
    m: float = 0.0

    def __post_init__(self):
        for name in ("Lx", "Ly", "L", "beta"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not (self.m >= 0 and math.isfinite(self.m)):
            raise ValueError(f"mass must be non-negative, got {self.m}")

    def scaled(self, s: float) -> "SlabGeometry":
        """All lengths multiplied by ``s`` (mass, an energy, divided by ``s``)."""
        return SlabGeometry(self.Lx * s, self.Ly * s, self.L * s, self.beta * s, self.m / s)


@dataclass(frozen=True)
class Mode:
    j: int
    k: int
    l: int
    n: int

    def __post_init__(self):
        if self.l < 1:
            raise InvalidMode(f"Dirichlet index must satisfy l >= 1, got l = {self.l}")

    def spatial(self) -> tuple[int, int, int]:
        return (self.j, self.k, self.l)


@dataclass(frozen=True)
class FourMomentum:
    """Euclidean four-momentum ``(i*omega_n, kvec)`` of one mode.

    ``chi = omega_k / k0`` is purely imaginary whenever ``omega_n`` is real
    and non-zero.
    """

    k0: complex
    kvec: tuple[float, float, float]
    omega_k: float
    chi: complex
    m: float = 0.0
    mode: Mode | None = field(default=None, compare=False)

    @property
    def omega_n(self) -> complex:
        w = self.k0 / 1j
        return w.real if w.imag == 0 else w

    @classmethod
    def from_components(cls, k0: complex, kvec, m: float = 0.0) -> "FourMomentum":
        """Build an arbitrary (possibly off-slab or complex) test momentum."""
        kvec = tuple(float(x) for x in kvec)
        k0 = complex(k0)
        if k0 == 0:
            raise InvalidMode("k0 = 0 is a zero mode; chi is undefined")
        omega_k = math.sqrt(kvec[0] ** 2 + kvec[1] ** 2 + kvec[2] ** 2 + m * m)
        return cls(k0, kvec, omega_k, omega_k / k0, m)


@dataclass(frozen=True)
class ModeWindow:
    jmax: int = 1
    kmax: int = 1
    lmax: int = 1
    nmax: int = 1

    def __post_init__(self):
        for name in ("jmax", "kmax", "lmax", "nmax"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def count(self) -> int:
        return self.lmax * (2 * self.jmax + 1) * (2 * self.kmax + 1) * (2 * self.nmax + 1)


def matsubara_frequency(n: int, beta: float, family: str = FERMIONIC) -> float:
    if family == FERMIONIC:
        return (2 * n + 1) * math.pi / beta
    if family == BOSONIC:
        return 2 * n * math.pi / beta
    raise ValueError(f"unknown frequency family {family!r}")


def spatial_momentum(geom: SlabGeometry, j: int, k: int, l: int) -> tuple[float, float, float]:
    return (2 * math.pi * j / geom.Lx, 2 * math.pi * k / geom.Ly, math.pi * l / geom.L)


def momentum(geom: SlabGeometry, mode: Mode, family: str = FERMIONIC) -> FourMomentum:
    """Four-momentum of ``mode``; bosonic ``n = 0`` is excluded as a zero mode."""
    if mode.l < 1:
        raise InvalidMode(f"l = {mode.l}")
    omega_n = matsubara_frequency(mode.n, geom.beta, family)
    if omega_n == 0:
        raise InvalidMode("bosonic n = 0 is a zero mode and is excluded")
    kvec = spatial_momentum(geom, mode.j, mode.k, mode.l)
    omega_k = math.sqrt(kvec[0] ** 2 + kvec[1] ** 2 + kvec[2] ** 2 + geom.m ** 2)
    k0 = 1j * omega_n
    return FourMomentum(k0, kvec, omega_k, omega_k / k0, geom.m, mode)


def enumerate_modes(geom: SlabGeometry, window: ModeWindow) -> Iterator[Mode]:
    """Modes in lexicographic ``(l, j, k, n)`` order; ``window.count`` of them."""
    ls = range(1, window.lmax + 1)
    js = range(-window.jmax, window.jmax + 1)
    ks = range(-window.kmax, window.kmax + 1)
    ns = range(-window.nmax, window.nmax + 1)
    for l, j, k, n in itertools.product(ls, js, ks, ns):
        yield Mode(j, k, l, n)


def random_modes(rng: np.random.Generator, count: int, *, jmax=3, kmax=3, lmax=4, nmax=3) -> list[Mode]:
    """Uniformly sampled modes; convenience for randomized checks."""
    out = []
    for _ in range(count):
        out.append(Mode(int(rng.integers(-jmax, jmax + 1)), int(rng.integers(-kmax, kmax + 1)),
                        int(rng.integers(1, lmax + 1)), int(rng.integers(-nmax, nmax + 1))))
    return out
