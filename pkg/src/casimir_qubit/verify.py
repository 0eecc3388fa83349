"""The verification suite behind ``casimir-qubit verify``.

Every check produces a :class:`~casimir_qubit.report.CheckEntry`. Per-mode
work is spread over a thread pool, but results are gathered in mode
enumeration order and reduced with order-independent maxima, so the report
is identical for any thread count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import subspace_angles

from . import __version__
from . import casimir as cs
from . import complexlinalg as cl
from . import entropyenergy as ee
from . import pseudodensity as pd
from . import zetareg as zr
from .clifford import ETA, dirac_basis, slash
from .errors import CasimirQubitError, MasslessSpinor
from .modes import ModeWindow, SlabGeometry, enumerate_modes, momentum
from .report import FAIL, INFO, PASS, SKIPPED, CheckEntry, VerificationReport


@dataclass
class RunConfig:
    Lx: float = 1.0
    Ly: float = 1.0
    L: float = 1.0
    beta: float = 1.0
    mass: float = 0.5
    window: tuple[int, int, int, int] = (2, 2, 2, 2)
    delta_grid: tuple[float, ...] = cs.DEFAULT_DELTA_OVER_L
    beta_grid: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0, 16.0)
    pmax: int = 5
    tolerances: dict = field(default_factory=dict)
    threads: int = 1
    format: str = "json"
    out: str | None = None
    spinors: bool = True

    @property
    def geometry(self) -> SlabGeometry:
        return SlabGeometry(self.Lx, self.Ly, self.L, self.beta, self.mass)

    @property
    def mode_window(self) -> ModeWindow:
        return ModeWindow(*self.window)

    def echo(self) -> dict:
        """Configuration as it enters the report; execution knobs are left out."""
        return {
            "Lx": self.Lx, "Ly": self.Ly, "L": self.L, "beta": self.beta, "mass": self.mass,
            "window": list(self.window), "delta_grid": list(self.delta_grid),
            "beta_grid": list(self.beta_grid), "pmax": self.pmax,
            "tolerances": dict(sorted(self.tolerances.items())), "spinors": self.spinors,
        }


def _max(xs) -> float:
    xs = list(xs)
    return float(max(xs)) if xs else 0.0


# ----------------------------------------------------------------- per-mode work

def _mode_metrics(geom: SlabGeometry, mode, want_spinors: bool) -> dict:
    basis = dirac_basis()
    p = momentum(geom, mode)
    r = pd.build_rho(p, basis)
    rho = r.rho
    scale = max(1.0, float(np.abs(rho).max()))
    I4 = np.eye(4)
    B = pd.build_B(p, basis)
    out = {
        "trace": abs(cl.trace(rho) - 1),
        "B_involution": float(np.abs(B @ B - I4).max()),
        "B_trace": abs(cl.trace(B)),
        "dual": r.construction_residual,
        "pseudo_herm": float(np.abs(basis.metric_B @ rho.conj().T - rho @ basis.metric_B).max()) / scale,
        "partial_first": float(np.abs(cl.partial_trace(rho, "first") - np.eye(2) / 2).max()),
        # tracing out the spin qubit leaves (I + (chi m / omega_k) Z) / 2, which is I/2 only when m = 0
        "partial_second": float(np.abs(cl.partial_trace(rho, "second")
                                       - (np.eye(2) + p.chi * p.m / p.omega_k * np.diag([1, -1])) / 2).max()),
        "chi_imag": abs(p.chi.real),
    }
    omega_n = p.omega_n
    out["purity"] = abs(pd.purity(r) - (1 - p.omega_k ** 2 / omega_n ** 2) / 4) / scale ** 2

    es = cl.eigen(rho)
    # match each computed eigenvalue to the nearer of the two predicted ones
    near = [min((r.lambda_plus, r.lambda_minus), key=lambda t: abs(v - t)) for v in es.values]
    out["spectrum"] = _max(abs(v - t) for v, t in zip(es.values, near))
    ok = sorted(es.multiplicities) == [2, 2] and near.count(r.lambda_plus) == 2
    out["multiplicity"] = 0.0 if ok else 1.0

    tf = pd.thermal_decompose(r, p, basis)
    out["thermal_recon"] = float(np.abs(tf.reconstruct() - rho).max()) / scale
    out["thermal_A"] = max(abs(tf.A * np.cosh(tf.alpha) - 0.25), abs(tf.A * np.sinh(tf.alpha) - p.chi / 4))
    out["beta_real"] = abs(tf.beta_check.imag)
    out["H_traceless"] = abs(cl.trace(tf.H))
    out["beta_sign"] = math.copysign(1.0, tf.beta_check.real)

    s = pd.realignment_spectrum(r)
    out["realign_ratio"] = float(s[1] / s[0])

    terms = pd.product_decomposition(r)
    recon = sum(t.matrix() for t in terms)
    out["decomp_recon"] = float(np.abs(recon - rho).max()) / scale
    out["decomp_weights"] = abs(pd.weight_sum(terms) - 1)
    out["decomp_rank1"] = _max(float(np.linalg.svd(f, compute_uv=False)[1] / np.linalg.svd(f, compute_uv=False)[0])
                               for t in terms for f in (t.factor1, t.factor2))
    out["decomp_terms"] = len(terms)

    S = pd.von_neumann_entropy(r)
    out["entropy_imag"] = abs(S.imag)
    out["entropy_paths"] = abs(S - pd.von_neumann_entropy_matrix(rho))
    c1 = pd.conditional_entropy(r, "first")
    c2 = pd.conditional_entropy(r, "second")
    c = p.chi * p.m / p.omega_k
    s_energy = -sum(x * np.log(x) for x in ((1 + c) / 2, (1 - c) / 2))
    out["conditional"] = max(abs(c1 - (S - math.log(2))), abs(c2 - (S - s_energy)))
    ld = pd.log_det_rho(r)
    out["log_det"] = abs(ld - 2 * np.log((1 + p.omega_k ** 2 / omega_n ** 2) / 16))

    lhs, rhs = cs.slp_mode_check(p, basis)
    out["slp"] = abs(lhs - rhs) / abs(lhs)
    k2 = sum(x * x for x in p.kvec)
    ks = slash(p, basis)
    out["slash_square"] = float(np.abs(ks @ ks - (p.k0 ** 2 - k2) * I4).max()) / max(1.0, abs(p.k0 ** 2 - k2))

    if want_spinors:
        q = pd.boosted_spinors(p, basis)
        out["spinor_residual"] = _max(q.residuals.values())
        out["spinor_assignment"] = all(
            abs(q.eigenvalue_of[(0, s_)] - r.lambda_plus) < 1e-12 and abs(q.eigenvalue_of[(1, s_)] - r.lambda_minus) < 1e-12
            for s_ in (0, 1))
        angles = []
        for lam, _, basis_vecs in es.clusters():
            e = 0 if abs(lam - r.lambda_plus) < abs(lam - r.lambda_minus) else 1
            pair = np.column_stack([q.spinors[(e, 0)], q.spinors[(e, 1)]])
            angles.append(float(np.max(subspace_angles(pair, basis_vecs))))
        out["spinor_angle"] = _max(angles)
    return out


def _mode_checks(cfg: RunConfig) -> list[CheckEntry]:
    geom = cfg.geometry
    modes = list(enumerate_modes(geom, cfg.mode_window))
    want_spinors = cfg.spinors and geom.m > 0
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as ex:
        metrics = list(ex.map(lambda m: _mode_metrics(geom, m, want_spinors), modes))

    def worst(key):
        return _max(m[key] for m in metrics)

    n = len(modes)
    A_rho = "pseudo-density matrix"
    A_th = "pseudo-density matrix: thermal form"
    out = [
        CheckEntry.measured("rho.trace", A_rho, worst("trace"), 1e-14, note=f"{n} modes"),
        CheckEntry.measured("rho.B_involution", A_rho, worst("B_involution"), 1e-13),
        CheckEntry.measured("rho.B_trace", A_rho, worst("B_trace"), 1e-13),
        CheckEntry.measured("rho.dual_construction", A_rho, worst("dual"), 1e-13),
        CheckEntry.measured("rho.spectrum", A_rho, worst("spectrum"), 1e-12,
                            note="eigenvalues (1 +- chi)/4"),
        CheckEntry.measured("rho.multiplicity", A_rho, worst("multiplicity"), 0.0,
                            note="two doubly degenerate eigenvalues"),
        CheckEntry.measured("rho.purity", A_rho, worst("purity"), 1e-13),
        CheckEntry.measured("rho.pseudo_hermiticity", A_rho, worst("pseudo_herm"), 1e-13),
        CheckEntry.measured("rho.partial_trace_first", A_rho, worst("partial_first"), 1e-13),
        CheckEntry.measured("rho.partial_trace_second", A_rho, worst("partial_second"), 1e-13),
        CheckEntry.measured("modes.chi_imaginary", "slab kinematics", worst("chi_imag"), 1e-15),
        CheckEntry.measured("thermal.reconstruction", A_th, worst("thermal_recon"), 1e-10),
        CheckEntry.measured("thermal.A_alpha", A_th, worst("thermal_A"), 1e-13),
        CheckEntry.measured("thermal.beta_real", A_th, worst("beta_real"), 1e-13),
        CheckEntry.measured("thermal.H_traceless", A_th, worst("H_traceless"), 1e-13),
        CheckEntry("thermal.beta_sign", A_th, INFO,
                   value=sorted({m["beta_sign"] for m in metrics}),
                   note="signs of the pseudo inverse temperature seen on the window (recorded only)"),
    ]
    ratio = min(m["realign_ratio"] for m in metrics)
    out.append(CheckEntry("separability.realignment_rank", "pseudo-density matrix: not a single product",
                          PASS if ratio > 0.1 else FAIL, ratio, 0.1,
                          note="minimum sigma2/sigma1 of the realigned matrix (lower bound)"))
    rng = np.random.default_rng(7)
    ctrl = []
    for _ in range(16):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        ctrl.append(pd.realignment_rank(np.kron(a, b), 0.1))
    ctrl.append(pd.realignment_rank(np.eye(4) / 4, 0.1))
    out.append(CheckEntry.measured("separability.product_control", "realignment control",
                                   float(max(abs(c - 1) for c in ctrl)), 0.0,
                                   note="explicit products have realignment rank 1"))
    A_dec = "pseudo-density matrix: sum of rank-one products"
    out += [
        CheckEntry.measured("decomposition.reconstruction", A_dec, worst("decomp_recon"), 1e-10),
        CheckEntry.measured("decomposition.weight_sum", A_dec, worst("decomp_weights"), 1e-10),
        CheckEntry.measured("decomposition.rank_one", A_dec, worst("decomp_rank1"), 1e-12),
        CheckEntry("decomposition.term_count", A_dec, INFO, value=int(worst("decomp_terms"))),
    ]
    A_ent = "von Neumann and conditional entropy"
    out += [
        CheckEntry.measured("entropy.real", A_ent, worst("entropy_imag"), 1e-13),
        CheckEntry.measured("entropy.two_paths", A_ent, worst("entropy_paths"), 1e-12),
        CheckEntry.measured("entropy.conditional", A_ent, worst("conditional"), 1e-13),
        CheckEntry.measured("entropy.log_det", A_ent, worst("log_det"), 1e-12),
        CheckEntry.measured("slp.mode_identity", "scalar vs Dirac determinant per mode",
                            worst("slp"), 1e-12),
        CheckEntry.measured("clifford.slash_square", "Clifford contraction", worst("slash_square"), 1e-14),
    ]
    A_sp = "boosted spinors"
    if want_spinors:
        out += [
            CheckEntry.measured("spinors.eigen_residual", A_sp, worst("spinor_residual"), 1e-10),
            CheckEntry.measured("spinors.subspace_angle", A_sp, worst("spinor_angle"), 1e-8),
            CheckEntry("spinors.assignment", A_sp,
                       PASS if all(m["spinor_assignment"] for m in metrics) else FAIL,
                       note="positive-energy spinors carry (1 + chi)/4 on every mode"),
        ]
    else:
        reason = "MasslessSpinor: m = 0" if geom.m == 0 else "disabled in config"
        for cid in ("spinors.eigen_residual", "spinors.subspace_angle", "spinors.assignment"):
            out.append(CheckEntry(cid, A_sp, SKIPPED, note=reason))
    return out


# ------------------------------------------------------------------ other suites

def _clifford_checks() -> list[CheckEntry]:
    b = dirac_basis()
    I4 = np.eye(4)
    anti = _max(np.abs(cl.anticommutator(b.gamma[m], b.gamma[n]) - 2 * ETA[m, n] * I4).max()
                for m in range(4) for n in range(4))
    herm = max(float(np.abs(b.gamma0.conj().T - b.gamma0).max()),
               _max(np.abs(g.conj().T + g).max() for g in b.spatial))
    tr = max(_max(abs(np.trace(g)) for g in b.gamma), _max(abs(np.trace(g @ b.gamma0)) for g in b.spatial))
    dets = _max(abs(np.linalg.det(g) - 1) for g in b.gamma)
    metric = float(np.abs(b.metric_B @ b.metric_B_inv - I4).max())
    A = "Dirac representation"
    return [
        CheckEntry.measured("clifford.anticommutators", A, anti, 1e-14),
        CheckEntry.measured("clifford.hermiticity", A, herm, 1e-14),
        CheckEntry.measured("clifford.traces", A, tr, 1e-14),
        CheckEntry.measured("clifford.determinants", A, dets, 1e-14),
        CheckEntry.measured("clifford.metric_inverse", A, metric, 1e-14),
    ]


def _zeta_checks(cfg: RunConfig) -> list[CheckEntry]:
    A = "Hurwitz zeta at negative even integers"
    out = [
        CheckEntry.measured("zeta.hurwitz_zeros", A,
                            _max(abs(zr.hurwitz_zeta(-2.0 * p, 0.5)) for p in range(1, 11)), 1e-14),
        CheckEntry.measured("zeta.bernoulli_odd_half", "Bernoulli polynomials",
                            _max(abs(zr.bernoulli_poly(2 * p + 1, 0.5)) for p in range(1, 11)), 1e-14),
        CheckEntry.measured("zeta.z_beta_zeros", "fermionic Z_beta(-2p)",
                            _max(abs(zr.z_beta(-2.0 * p, cfg.beta).value) for p in range(1, 6)), 1e-14),
        CheckEntry.measured("zeta.riemann_hurwitz", "zeta consistency",
                            max(abs(zr.hurwitz_zeta(3.0, 1.0) - zr.riemann_zeta(3.0)),
                                abs(zr.hurwitz_zeta(4.0, 0.5) - 15 * zr.riemann_zeta(4.0))), 1e-12),
        CheckEntry.measured("zeta.digamma_reflection", "digamma",
                            abs(zr.digamma(0.75) - zr.digamma(0.25) - math.pi), 1e-10),
    ]
    grid = [(b, w) for b in (0.5, 1.0, 2.0, 4.0, 8.0) for w in (0.3, 1.0, 2.5, 6.0)]
    gap = 0.0
    for b, w in grid:
        closed = 2 * zr._log_cosh(b * w / 2)
        gap = max(gap, abs(zr.matsubara_log_sum_truncated(w, b) - closed) / max(1.0, closed))
    out.append(CheckEntry.measured("matsubara.closed_form", "fermionic Matsubara log sum", gap, 1e-9,
                                   note="20-point (beta, omega) grid"))
    w = math.pi
    b = 50 / w
    zt = abs(ee.zero_temperature_summand(w, b) / b - 2 * w) / (2 * w)
    out.append(CheckEntry.measured("matsubara.zero_temperature", "zero-temperature effective action",
                                   zt, 1e-9, note="beta omega = 50; k0 factor dropped"))
    return out


def _casimir_checks(cfg: RunConfig) -> list[CheckEntry]:
    A = "parallel-plate Casimir energy"
    out = []
    exact = max(abs(cs.casimir_zeta(L).energy_per_area / (-math.pi ** 2 / (1440 * L ** 3)) - 1)
                for L in (0.5, 1.0, 2.0))
    out.append(CheckEntry.measured("casimir.zeta_closed", A, exact, 1e-14))
    ferm = max(abs(cs.casimir_zeta(L, cs.FERMION).energy_per_area / (-math.pi ** 2 / (720 * L ** 3)) - 1)
               for L in (0.5, 1.0, 2.0))
    out.append(CheckEntry.measured("casimir.fermion", A, ferm, 1e-14))
    cut = cs.CutoffConfig(tuple(cfg.delta_grid))
    agree = max(abs(cs.casimir_cutoff_oracle(L, cut).energy_per_area / cs.casimir_zeta(L).energy_per_area - 1)
                for L in (0.5, 1.0, 2.0))
    out.append(CheckEntry.measured("casimir.cutoff_agreement", A, agree, 1e-3,
                                   note="exponential cutoff vs zeta continuation, L in {0.5, 1, 2}"))
    e = cs.casimir_zeta(cfg.L)
    out.append(CheckEntry.measured("casimir.effective_energy_C2_zero", "heat-kernel ambiguity",
                                   abs(cs.effective_energy(e, 0.0, 1.0) - e.energy_per_area), 0.0))
    lhs, rhs = cs.zeta_factorization_check(3.0, [1.0, 4.0, 9.0])
    out.append(CheckEntry.measured("casimir.zeta_factorization", "spectral zeta factorization",
                                   abs(lhs - rhs) / abs(rhs), 1e-8))
    return out


def _entropy_energy_checks(cfg: RunConfig) -> list[CheckEntry]:
    A = "Casimir energy as the zero-temperature entropy per unit beta"
    conv = ee.LITERAL_CONVENTIONS
    results = {}
    for L in (0.5, 1.0, 2.0, cfg.L):
        g = SlabGeometry(cfg.Lx, cfg.Ly, L, cfg.beta, 0.0)
        results[L] = ee.entropy_energy_pipeline(g, cfg.beta_grid, conv, threads=cfg.threads)
    r = results[cfg.L]
    out = [CheckEntry.measured("entropy_energy.headline", A, r.relative_error, 1e-3,
                               conventions=r.conventions, value=r.extrapolated,
                               note=f"|S/beta| vs pi^2/(720 L^3); limit sign {r.notes['sign_of_limit']:+.0f}, "
                                    f"energy sign {r.notes['sign_of_casimir']:+.0f}; "
                                    f"all four components: {r.all_components:.6e}")]
    ref = results[1.0].extrapolated
    scal = max(abs(results[L].extrapolated * L ** 3 / ref - 1) for L in (0.5, 2.0))
    out.append(CheckEntry.measured("entropy_energy.L_scaling", A, scal, 1e-3, conventions=r.conventions))
    out.append(CheckEntry("entropy_energy.constant_bucket", A, INFO, note=r.notes["constant_bucket"]))
    # thermodynamic entropy of one mode vanishes at zero temperature
    w = math.pi / cfg.L
    betas = [0.25 * 2 ** k for k in range(6)]
    st = [ee.thermodynamic_entropy(w, b) for b in betas]
    mono = all(b < a for a, b in zip(st, st[1:]))
    out.append(CheckEntry("thermo.entropy_vanishes", "thermodynamic entropy at zero temperature",
                          PASS if mono and st[-1] < 1e-6 else FAIL, st[-1], 1e-6,
                          note="monotone decrease on the beta grid" if mono else "not monotone"))
    return out


def run_verify(cfg: RunConfig) -> VerificationReport:
    checks: list[CheckEntry] = []
    checks += _clifford_checks()
    checks += _mode_checks(cfg)
    checks += _zeta_checks(cfg)
    flat = SlabGeometry(cfg.Lx, cfg.Ly, cfg.L, cfg.beta, 0.0)
    checks += ee.series_identity_check(flat, cfg.pmax)
    checks += ee.gamma_equals_minus_entropy_check(cfg.geometry, [(0, 0, 1), (1, 0, 1), (1, -1, 2)])
    checks += _casimir_checks(cfg)
    try:
        checks += _entropy_energy_checks(cfg)
    except CasimirQubitError as exc:
        checks.append(CheckEntry("entropy_energy.headline", "entropy-energy pipeline", FAIL,
                                 note=f"{type(exc).__name__}: {exc}"))
    checks = apply_tolerance_overrides(checks, cfg.tolerances)
    return VerificationReport(checks, __version__, cfg.echo())


def apply_tolerance_overrides(checks: list[CheckEntry], overrides: dict) -> list[CheckEntry]:
    """Re-judge measured checks whose id matches an override key.

    A key matches its exact id, any id below it (``rho`` matches
    ``rho.trace``) or everything (``*``). The most specific key wins.
    """
    if not overrides:
        return checks
    out = []
    for c in checks:
        keys = [k for k in overrides if k == "*" or c.id == k or c.id.startswith(k + ".")]
        if not keys or c.residual is None or c.status not in (PASS, FAIL) or c.tolerance is None:
            out.append(c)
            continue
        key = max(keys, key=lambda k: (k != "*", len(k)))
        tol = float(overrides[key])
        lower_bound = "lower bound" in c.note
        ok = c.residual > tol if lower_bound else c.residual <= tol
        out.append(replace(c, tolerance=tol, status=PASS if ok else FAIL))
    return out
