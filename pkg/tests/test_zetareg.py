import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_qubit import zetareg as zr
from casimir_qubit.errors import (InvalidA, NonConvergent, OrderTooLarge, PoleAtNonPositiveInteger,
                                  PoleAtOne, PoleDetected)
from casimir_qubit.modes import BOSONIC, SlabGeometry

mpmath.mp.dps = 30


# ---------------------------------------------------------------- Bernoulli

def test_bernoulli_numbers_exact():
    assert zr.bernoulli_number(1) == Fraction(-1, 2)
    assert zr.bernoulli_number(4) == Fraction(-1, 30)
    assert zr.bernoulli_number(12) == Fraction(-691, 2730)
    assert all(zr.bernoulli_number(2 * k + 1) == 0 for k in range(1, 20))


def test_bernoulli_order_limit():
    with pytest.raises(OrderTooLarge):
        zr.bernoulli_number(61)


@pytest.mark.parametrize("n", range(0, 12))
def test_bernoulli_poly_against_mpmath(n):
    for x in (0.0, 0.25, 0.5, 1.3):
        assert zr.bernoulli_poly(n, x) == pytest.approx(float(mpmath.bernpoly(n, x)), rel=1e-13, abs=1e-14)


def test_bernoulli_odd_at_half_exactly_zero():
    for p in range(1, 11):
        assert zr.bernoulli_poly_exact(2 * p + 1, Fraction(1, 2)) == 0


# -------------------------------------------------------------------- zetas

def test_riemann_constants():
    assert zr.riemann_zeta(2.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
    assert zr.riemann_zeta(-3.0) == pytest.approx(1 / 120, rel=1e-15)
    assert zr.riemann_zeta(-2.0) == 0
    assert zr.riemann_zeta(0.0) == -0.5
    with pytest.raises(PoleAtOne):
        zr.riemann_zeta(1.0)


@pytest.mark.parametrize("s", [-7.5, -3.3, -0.5, 0.3, 0.5, 1.5, 2.5, 3.0, 7.0, 15.0])
def test_riemann_against_mpmath(s):
    assert zr.riemann_zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-12)


@pytest.mark.parametrize("s,a", [(2.0, 0.5), (3.0, 0.25), (1.5, 2.0), (-1.0, 0.5), (-3.0, 0.3),
                                 (0.5, 0.7), (4.0, 10.5), (-2.5, 1.5)])
def test_hurwitz_against_mpmath(s, a):
    assert zr.hurwitz_zeta(s, a) == pytest.approx(float(mpmath.zeta(s, a)), rel=1e-11, abs=1e-14)


def test_hurwitz_zeros_at_half():
    for p in range(1, 11):
        assert abs(zr.hurwitz_zeta(-2.0 * p, 0.5)) < 1e-14


def test_hurwitz_errors():
    with pytest.raises(PoleAtOne):
        zr.hurwitz_zeta(1.0, 0.5)
    with pytest.raises(InvalidA):
        zr.hurwitz_zeta(2.0, 0.0)


@given(st.floats(1.1, 12), st.floats(0.05, 5))
@settings(max_examples=80, deadline=None)
def test_hurwitz_shift_identity(s, a):
    # zeta(s, a) = a^-s + zeta(s, a + 1)
    lhs = zr.hurwitz_zeta(s, a)
    rhs = a ** -s + zr.hurwitz_zeta(s, a + 1)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("s", [-3.5, -0.5, 0.25, 1.0, 2.0, 7.3, 40.0])
def test_digamma_against_mpmath(s):
    assert zr.digamma(s) == pytest.approx(float(mpmath.digamma(s)), rel=1e-12, abs=1e-14)


def test_digamma_known_values_and_poles():
    assert zr.digamma(1.0) == pytest.approx(-zr.EULER_GAMMA, rel=1e-14)
    assert zr.digamma(0.5) == pytest.approx(-zr.EULER_GAMMA - 2 * math.log(2), rel=1e-14)
    for s in (0.0, -1.0, -4.0):
        with pytest.raises(PoleAtNonPositiveInteger):
            zr.digamma(s)


# ------------------------------------------------------- regularized sums

def test_z_beta_zeros():
    for p in range(1, 6):
        for beta in (0.3, 1.0, 7.0):
            assert abs(zr.z_beta(-2.0 * p, beta).value) < 1e-14


def test_z_beta_sigma_one_is_zero():
    v = zr.z_beta(0.0, 2.0)
    assert v.value == 0
    assert zr.SIGMA_ONE_FERMIONIC in v.conventions


def test_z_beta_continuation_matches_truncated():
    cont = zr.z_beta(2.0, 1.0)
    assert cont.value == pytest.approx(0.25, rel=1e-14)
    trunc = zr.z_beta_truncated(2.0, 1.0)
    assert abs(trunc.value - cont.value) < 1e-10


@pytest.mark.parametrize("q,beta", [(3.5, 1.0), (4.0, 2.0), (2.2, 0.7)])
def test_z_beta_truncated_general(q, beta):
    cont = zr.z_beta(q, beta).value
    trunc = zr.z_beta_truncated(q, beta, nmax=10 ** 5).value
    assert abs(trunc - cont) < 1e-9 * max(1.0, abs(cont))


def test_z_beta_bosonic():
    # sum_{n != 0} (2 pi n / beta)^-2 = 2 (beta/2pi)^2 zeta(2)
    assert zr.z_beta(2.0, 1.0, BOSONIC).value == pytest.approx(1 / 12, rel=1e-14)


def test_z_beta_pole():
    with pytest.raises(PoleDetected) as exc:
        zr.z_beta(1.0, 1.0)
    assert exc.value.location == 1.0


def test_z_spatial_closed_forms():
    for L in (0.5, 1.0, 2.0):
        g = SlabGeometry(L=L)
        assert zr.z_spatial(-1.0, g).value == pytest.approx(-math.pi ** 2 / (720 * L ** 3), rel=1e-14)
        assert zr.z_spatial(0.0, g).value == 0
    for q in (2.0, 3.0):
        with pytest.raises(PoleDetected):
            zr.z_spatial(q, SlabGeometry())


def test_z_spatial_q5_against_independent_quadrature():
    # per area: sum_l int d^2k/(2pi)^2 (k^2 + a_l^2)^(-5/2) = sum_l 1/(6 pi a_l^3)
    L = 1.3
    oracle = mpmath.nsum(lambda l: 1 / (6 * mpmath.pi * (mpmath.pi * l / L) ** 3), [1, mpmath.inf])
    inner = mpmath.quad(lambda k: k / (2 * mpmath.pi) * (k ** 2 + (mpmath.pi / L) ** 2) ** -2.5, [0, mpmath.inf])
    assert float(inner) == pytest.approx(1 / (6 * math.pi * (math.pi / L) ** 3), rel=1e-12)
    assert zr.z_spatial(5.0, SlabGeometry(L=L)).value == pytest.approx(float(oracle), rel=1e-12)


def test_z_spatial_truncated_approaches_continuum():
    g = SlabGeometry(Lx=4.0, Ly=4.0, L=1.0)
    t = zr.z_spatial_truncated(6.0, g, 40, 40, 40)
    c = zr.z_spatial(6.0, g).value
    assert abs(t.value - c) / c < 0.05
    with pytest.raises(ValueError):
        zr.z_spatial_truncated(3.0, g, 2, 2, 2)


# -------------------------------------------------------- Matsubara sums

def test_matsubara_log_sum_examples():
    assert zr.matsubara_log_sum(0.0, 1.0) == 0
    assert zr.matsubara_log_sum(1.0, 1.0) == pytest.approx(2 * math.log(math.cosh(0.5)), rel=1e-14)


def test_matsubara_log_sum_against_mpmath_product():
    # cosh(x/2) = prod_n (1 + x^2 / ((2n+1)^2 pi^2)) over n >= 0
    mpmath.mp.dps = 30
    for beta, omega in [(1.0, 0.3), (2.0, 1.7), (0.5, 8.0)]:
        x = beta * omega
        oracle = 2 * mpmath.nsum(lambda n: mpmath.log(1 + x ** 2 / ((2 * n + 1) * mpmath.pi) ** 2), [0, mpmath.inf])
        assert zr.matsubara_log_sum_truncated(omega, beta) == pytest.approx(float(oracle), rel=1e-12)


def test_matsubara_log_sum_monotone_from_below():
    w = 1.3
    vals = [zr.matsubara_log_sum(w, b) / b for b in (0.5, 1, 2, 4, 8, 16)]
    assert all(v < w for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_matsubara_log_sum_large_beta_gap_is_ln2():
    # result / beta approaches omega only up to 2 ln 2 / beta; at beta omega = 50
    # the relative gap is 2 ln 2 / 50, far above 1e-9
    w = math.pi
    b = 50 / w
    gap = w - zr.matsubara_log_sum(w, b) / b
    assert gap * b == pytest.approx(2 * math.log(2), rel=1e-12)


def test_regularized_matsubara_log_limit():
    w = math.pi
    b = 50 / w
    assert zr.regularized_matsubara_log(w, b) / b == pytest.approx(w, rel=1e-9)


def test_matsubara_log_sum_rejects_bad_input():
    with pytest.raises(ValueError):
        zr.matsubara_log_sum(-1.0, 1.0)
    with pytest.raises(ValueError):
        zr.matsubara_log_sum(1.0, 1.0, family=BOSONIC)


def test_closed_form_mismatch_is_detected(monkeypatch):
    monkeypatch.setattr(zr, "matsubara_log_sum_truncated", lambda w, b: 0.0)
    with pytest.raises(NonConvergent):
        zr.matsubara_log_sum(1.0, 1.0)


def test_regularized_value_validation():
    with pytest.raises(ValueError):
        zr.RegularizedValue(1.0, zr.CLOSED_FORM, 1e-3)
    with pytest.raises(ValueError):
        zr.RegularizedValue(1.0, zr.TRUNCATED_SUM, -1.0)
