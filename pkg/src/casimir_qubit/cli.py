"""Command-line front end: ``casimir-qubit {verify,energy,mode,entropy-energy,zeta}``.

Settings resolve as command-line flags, then the ``CASIMIR_QUBIT_THREADS``
environment variable (threads only), then a ``key = value`` config file,
then defaults. Exit status is 0 when nothing failed, 1 when a check failed,
2 on a configuration error and 3 when an extrapolation was unstable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import casimir as cs
from . import entropyenergy as ee
from . import pseudodensity as pd
from . import zetareg as zr
from .errors import CasimirQubitError, ConfigError, ExtrapolationUnstable, MasslessSpinor
from .modes import Mode, SlabGeometry, momentum
from .report import SCHEMA, encode, fmt
from .verify import RunConfig, run_verify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_UNSTABLE = 0, 1, 2, 3
THREADS_ENV = "CASIMIR_QUBIT_THREADS"

_FLOAT_KEYS = ("Lx", "Ly", "L", "beta", "mass")


def _int_tuple(text: str, n: int | None = None, what: str = "value") -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated integers, got {text!r}") from None
    if n is not None and len(out) != n:
        raise ConfigError(f"{what}: expected {n} integers, got {len(out)}")
    return out


def _float_tuple(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _positive_float(text, what: str) -> float:
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{what}: must be finite")
    return v


def _bool(text: str, what: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{what}: expected a boolean, got {text!r}")


def read_config_file(path: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    out = {}
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{path}:{num}: empty key")
        out[key] = value
    return out


def _apply(cfg: RunConfig, key: str, value: str) -> None:
    if key in _FLOAT_KEYS:
        setattr(cfg, key, _positive_float(value, key))
    elif key == "window":
        cfg.window = _int_tuple(value, 4, "window")
    elif key == "delta_grid":
        cfg.delta_grid = _float_tuple(value, "delta_grid")
    elif key == "beta_grid":
        cfg.beta_grid = _float_tuple(value, "beta_grid")
    elif key == "pmax":
        cfg.pmax = _int_tuple(value, 1, "pmax")[0]
    elif key == "threads":
        cfg.threads = _int_tuple(value, 1, "threads")[0]
    elif key == "format":
        cfg.format = value
    elif key == "out":
        cfg.out = value
    elif key == "spinors":
        cfg.spinors = _bool(value, "spinors")
    elif key.startswith("tol."):
        cfg.tolerances[key[4:]] = _positive_float(value, key)
    else:
        raise ConfigError(f"unknown config key {key!r}")


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Merge defaults, config file, environment and flags (later wins)."""
    environ = os.environ if environ is None else environ
    cfg = RunConfig(tolerances={})
    if getattr(args, "config", None):
        for k, v in read_config_file(args.config).items():
            _apply(cfg, k, v)
    if environ.get(THREADS_ENV):
        _apply(cfg, "threads", environ[THREADS_ENV])
    for key in _FLOAT_KEYS:
        v = getattr(args, key if key != "mass" else "mass", None)
        if v is not None:
            _apply(cfg, key, v)
    for key in ("window", "delta_grid", "beta_grid", "pmax", "threads", "format", "out"):
        v = getattr(args, key, None)
        if v is not None:
            _apply(cfg, key, str(v))
    for item in getattr(args, "tol", None) or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects ID=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        cfg.tolerances[k.strip()] = _positive_float(v, f"--tol {k}")
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    for key in ("Lx", "Ly", "L", "beta"):
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"{key} must be positive")
    if cfg.mass < 0:
        raise ConfigError("mass must be non-negative")
    if any(w < 1 for w in cfg.window):
        raise ConfigError("window entries must be >= 1")
    if cfg.pmax < 2:
        raise ConfigError("pmax must be at least 2")
    if cfg.threads < 1:
        raise ConfigError("threads must be at least 1")
    if cfg.format not in ("json", "csv"):
        raise ConfigError("format must be json or csv")
    if any(t < 0 for t in cfg.tolerances.values()):
        raise ConfigError("tolerances must be non-negative")
    try:
        cs.CutoffConfig(tuple(cfg.delta_grid))
    except ValueError as exc:
        raise ConfigError(f"delta_grid: {exc}") from None
    if len(cfg.beta_grid) < 2 or any(b <= 0 for b in cfg.beta_grid):
        raise ConfigError("beta_grid needs at least two positive values")


def _json_line(record: dict) -> str:
    """One JSON object with floats in fixed 17-digit e-notation."""
    parts = []
    for k, v in record.items():
        if isinstance(v, float):
            text = fmt(v) if math.isfinite(v) else json.dumps(repr(v))
        else:
            text = json.dumps(encode(v), sort_keys=True)
        parts.append(f"{json.dumps(k)}: {text}")
    return "{" + ", ".join(parts) + "}\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------- commands

def cmd_verify(args, cfg: RunConfig) -> int:
    report = run_verify(cfg)
    _emit(report.to_json() if cfg.format == "json" else report.to_csv(), cfg.out)
    s = report.summary()
    print(f"verify: {s['pass']} pass, {s['fail']} fail, {s['info']} info, {s['skipped']} skipped",
          file=sys.stderr)
    return EXIT_FAIL if report.failed else EXIT_OK


def cmd_energy(args, cfg: RunConfig) -> int:
    fld = cs.SCALAR if args.field == "scalar" else cs.FERMION
    if args.method == "zeta":
        r = cs.casimir_zeta(cfg.L, fld)
    else:
        r = cs.casimir_cutoff_oracle(cfg.L, cs.CutoffConfig(tuple(cfg.delta_grid)), fld)
    rec = {"schema": SCHEMA, "L": r.L, "field": r.field, "method": r.method,
           "energy_per_area": r.energy_per_area, "uncertainty": r.uncertainty}
    if cfg.format == "json":
        text = _json_line(rec)
    else:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(list(rec))
        w.writerow([fmt(v) if isinstance(v, float) else v for v in rec.values()])
        text = buf.getvalue()
    _emit(text, cfg.out)
    return EXIT_OK


def _mode_payload(what: str, geom: SlabGeometry, mode: Mode) -> dict:
    p = momentum(geom, mode)
    r = pd.build_rho(p)
    head = {"schema": SCHEMA, "mode": [mode.j, mode.k, mode.l, mode.n],
            "k0": p.k0, "kvec": list(p.kvec), "omega_k": p.omega_k, "chi": p.chi}
    if what == "rho":
        head.update(rho=r.rho, trace=complex(np.trace(r.rho)))
    elif what == "spectrum":
        head.update(eigenvalues=list(r.eigenvalues), multiplicities=[2, 2],
                    realignment_singular_values=pd.realignment_spectrum(r))
    elif what == "thermal":
        tf = pd.thermal_decompose(r, p)
        head.update(A=tf.A, alpha=tf.alpha, beta_check=tf.beta_check, H=tf.H)
    elif what == "entropy":
        S = pd.von_neumann_entropy(r)
        head.update(von_neumann=S.real, von_neumann_imag=S.imag,
                    conditional=pd.conditional_entropy(r).real, log_det=pd.log_det_rho(r))
    elif what == "spinors":
        q = pd.boosted_spinors(p)
        head.update(spinors=[{"lambda_E": e, "lambda_s": s, "vector": q.spinors[(e, s)],
                              "eigenvalue": q.eigenvalue_of[(e, s)], "residual": q.residuals[(e, s)]}
                             for (e, s) in sorted(q.spinors)])
    return head


def cmd_mode(args, cfg: RunConfig) -> int:
    j, k, l, n = _int_tuple(args.mode, 4, "--mode")
    geom = cfg.geometry
    try:
        payload = _mode_payload(args.what, geom, Mode(j, k, l, n))
    except MasslessSpinor as exc:
        raise ConfigError(f"spinors need mass > 0: {exc}") from None
    _emit(json.dumps(encode(payload), indent=2) + "\n", cfg.out)
    return EXIT_OK


def cmd_entropy_energy(args, cfg: RunConfig) -> int:
    geom = SlabGeometry(cfg.Lx, cfg.Ly, cfg.L, cfg.beta, 0.0)
    conv = ee.ConventionSet(dof_weight=args.dof_weight)
    r = ee.entropy_energy_pipeline(geom, cfg.beta_grid, conv, threads=cfg.threads)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["row", "beta", "S_per_area", "S_over_beta"])
        for b, s, sb in r.table:
            w.writerow(["grid", fmt(b), fmt(s), fmt(sb)])
        w.writerow(["limit", "inf", "", fmt(r.extrapolated)])
        text = buf.getvalue()
    else:
        doc = {"schema": SCHEMA, "L": r.L, "table": [list(t) for t in r.table],
               "extrapolated": r.extrapolated, "uncertainty": r.uncertainty,
               "target_magnitude": abs(r.target), "relative_error": r.relative_error,
               "all_components": r.all_components, "conventions": r.conventions, "notes": r.notes}
        text = json.dumps(encode(doc), indent=2) + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_zeta(args, cfg: RunConfig) -> int:
    f = args.function
    if f == "riemann":
        v = zr.riemann_zeta(args.s)
    elif f == "hurwitz":
        v = zr.hurwitz_zeta(args.s, args.a)
    elif f == "digamma":
        v = zr.digamma(args.s)
    elif f == "bernoulli":
        v = zr.bernoulli_poly(int(args.order), args.a)
    elif f == "z_beta":
        v = zr.z_beta(args.s, cfg.beta).value
    else:
        v = zr.z_spatial(args.s, SlabGeometry(cfg.Lx, cfg.Ly, cfg.L, cfg.beta, 0.0)).value
    _emit(_json_line({"schema": SCHEMA, "function": f, "s": args.s, "a": args.a, "value": float(v)}), cfg.out)
    return EXIT_OK


# --------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value config file")
    for key in ("L", "Lx", "Ly", "beta"):
        common.add_argument(f"--{key}", type=float, default=None)
    common.add_argument("--mass", type=float, default=None)
    common.add_argument("--window", metavar="J,K,L,N", default=None)
    common.add_argument("--delta-grid", dest="delta_grid", metavar="D1,D2,...", default=None,
                        help="cutoff regulators as multiples of L, descending")
    common.add_argument("--beta-grid", dest="beta_grid", metavar="B1,B2,...", default=None)
    common.add_argument("--pmax", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--out", metavar="PATH", default=None)
    common.add_argument("--tol", action="append", metavar="ID=VALUE",
                        help="override a check tolerance; ID may be a prefix or *")

    parser = argparse.ArgumentParser(prog="casimir-qubit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the verification suite")
    e = sub.add_parser("energy", parents=[common], help="Casimir energy per area")
    e.add_argument("--field", choices=("scalar", "fermion"), default="scalar")
    e.add_argument("--method", choices=("zeta", "cutoff"), default="zeta")
    m = sub.add_parser("mode", parents=[common], help="inspect one mode's pseudo-density matrix")
    m.add_argument("--mode", required=True, metavar="J,K,L,N")
    m.add_argument("--what", choices=("rho", "thermal", "spectrum", "entropy", "spinors"), default="rho")
    ee_ = sub.add_parser("entropy-energy", parents=[common], help="zero-temperature entropy limit")
    ee_.add_argument("--dof-weight", dest="dof_weight", type=float, default=0.5)
    z = sub.add_parser("zeta", parents=[common], help="evaluate a zeta-type function")
    z.add_argument("--function", choices=("riemann", "hurwitz", "digamma", "bernoulli", "z_beta", "z_spatial"),
                   default="riemann")
    z.add_argument("--s", type=float, default=2.0)
    z.add_argument("--a", type=float, default=1.0)
    z.add_argument("--order", type=int, default=2, help="order of the Bernoulli polynomial")
    return parser


COMMANDS = {"verify": cmd_verify, "energy": cmd_energy, "mode": cmd_mode,
            "entropy-energy": cmd_entropy_energy, "zeta": cmd_zeta}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ExtrapolationUnstable as exc:
        print(f"error: extrapolation unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (CasimirQubitError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
