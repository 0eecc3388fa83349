import math

import numpy as np
import pytest
from scipy import integrate

from casimir_qubit import entropyenergy as ee
from casimir_qubit.errors import ExtrapolationUnstable, TailEstimateFailure
from casimir_qubit.modes import SlabGeometry
from casimir_qubit.report import FAIL, INFO, PASS

GRID = (1.0, 2.0, 4.0, 8.0, 16.0)


def test_convention_set_validation_and_stamps():
    with pytest.raises(ValueError):
        ee.ConventionSet(gamma1_sign=2)
    with pytest.raises(ValueError):
        ee.ConventionSet(dof_weight=0)
    st = ee.LITERAL_CONVENTIONS.stamps()
    assert st["dof_weight"] == 0.5
    assert "zeta_H(0, 1/2)" in st["sum_n_1"]


def test_matsubara_entropy_sum_example():
    # beta = 1, omega_k = pi: direct window |n| <= 1e5 vs 4 ln cosh(pi/2)
    direct, closed = ee.matsubara_entropy_sum(SlabGeometry(), (0, 0, 1), nmax=10 ** 5)
    assert closed == pytest.approx(4 * math.log(math.cosh(math.pi / 2)), rel=1e-14)
    assert abs(direct - closed) < 1e-9


@pytest.mark.parametrize("beta,omega", [(0.5, 0.2), (1.0, 3.0), (4.0, 2.5), (10.0, 1.0)])
def test_log_det_direct_vs_closed(beta, omega):
    direct, closed = ee.matsubara_entropy_sum_omega(omega, beta)
    assert direct == pytest.approx(closed, rel=1e-10, abs=1e-10)


def test_tail_failure_for_tiny_window():
    with pytest.raises(TailEstimateFailure):
        ee.matsubara_entropy_sum_omega(100.0, 10.0, nmax=3)


def test_zero_temperature_summand_limit():
    w = math.pi
    b = 50 / w
    assert ee.zero_temperature_summand(w, b) / b == pytest.approx(2 * w, rel=1e-9)


def test_literal_log_det_misses_limit_by_ln2():
    # 4 ln cosh(beta omega / 2) / beta falls short of 2 omega by 4 ln 2 / beta
    w = math.pi
    b = 50 / w
    gap = 2 * w - ee.log_det_closed(w, b) / b
    assert gap * b == pytest.approx(4 * math.log(2), rel=1e-12)


def test_thermodynamic_entropy_finite_difference():
    w = 1.7

    def lnz(b):
        return 4 * math.log1p(math.exp(-b * w))

    for b in (0.3, 1.0, 3.0):
        h = 1e-5
        dlnz = (lnz(b + h) - lnz(b - h)) / (2 * h)
        assert ee.thermodynamic_entropy(w, b) == pytest.approx(lnz(b) - b * dlnz, rel=1e-8)


def test_thermodynamic_entropy_vanishes_monotonically():
    w = math.pi
    vals = [ee.thermodynamic_entropy(w, b) for b in GRID]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-6
    assert ee.thermodynamic_entropy(w, 1e-6) == pytest.approx(4 * math.log(2), rel=1e-5)


@pytest.mark.parametrize("beta,L", [(1.0, 1.0), (0.5, 2.0), (3.0, 0.7)])
def test_thermal_transverse_sum_against_quadrature(beta, L):
    parts = []
    for l in range(1, 500):
        a = math.pi * l / L
        v, _ = integrate.quad(lambda k: k / (2 * math.pi) * math.log1p(math.exp(-beta * math.hypot(k, a))),
                              0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
        parts.append(v)
        if v < 1e-20:
            break
    assert ee.thermal_transverse_sum(beta, L) == pytest.approx(math.fsum(parts), rel=1e-9)


def test_richardson_exact_on_linear_model():
    betas = [1.0, 2.0, 4.0, 8.0]
    vals = [3.0 + 0.7 / b for b in betas]
    est, _ = ee.richardson(betas, vals)
    assert est == pytest.approx(3.0, rel=1e-14)


def test_pipeline_headline():
    r = ee.entropy_energy_pipeline(SlabGeometry(), GRID)
    assert abs(r.extrapolated) == pytest.approx(math.pi ** 2 / 720, rel=1e-3)
    assert r.relative_error < 1e-3
    assert r.conventions == ee.LITERAL_CONVENTIONS.stamps()
    assert r.all_components == pytest.approx(r.extrapolated / 0.5)
    assert len(r.table) == len(GRID)
    # the limit and the energy come out with opposite signs
    assert r.notes["sign_of_limit"] == -r.notes["sign_of_casimir"]


def test_pipeline_scaling():
    vals = {L: ee.entropy_energy_pipeline(SlabGeometry(L=L), GRID).extrapolated for L in (0.5, 1.0, 2.0)}
    for L in (0.5, 2.0):
        assert vals[L] * L ** 3 == pytest.approx(vals[1.0], rel=1e-3)


def test_pipeline_thread_invariance():
    a = ee.entropy_energy_pipeline(SlabGeometry(), GRID, threads=1)
    b = ee.entropy_energy_pipeline(SlabGeometry(), GRID, threads=4)
    assert a == b


def test_pipeline_guards():
    with pytest.raises(ExtrapolationUnstable):
        ee.entropy_energy_pipeline(SlabGeometry(), (1.0, 2.0, 4.0))
    with pytest.raises(ValueError):
        ee.entropy_energy_pipeline(SlabGeometry(m=1.0), GRID)


def test_series_identity_entries():
    checks = ee.series_identity_check(SlabGeometry(), pmax=5)
    by_id = {c.id: c for c in checks}
    assert by_id["series.z_spatial.p1"].status == INFO
    assert "pole" in by_id["series.z_spatial.p1"].note
    for p in range(1, 6):
        assert by_id[f"series.z_beta.p{p}"].status == PASS
    assert not any(c.status == FAIL for c in checks)
    # the convergent n-sum at fixed mode is not zero
    assert by_id["series.convergent_matsubara_sum"].value == pytest.approx(-2.03, abs=0.01)
    with pytest.raises(ValueError):
        ee.series_identity_check(SlabGeometry(), pmax=1)


def test_gamma_entropy_chain():
    checks = ee.gamma_equals_minus_entropy_check(SlabGeometry(m=0.3), [(0, 0, 1), (1, 1, 2)])
    assert all(c.status in (PASS, INFO) for c in checks)
    assert sum(c.status == PASS for c in checks) == 6
