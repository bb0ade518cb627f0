"""Command-line driver: ``hckit {verify,trace,modulus,distortion,operators}``.

Reports are JSON with a top-level ``"schema": 1`` and sorted keys.  Exit
codes: 0 when every check passes, 1 on a check failure, 2 on a usage or
configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import catalog as C
from .errors import HCKitError, HitZero, LeftDomain, NotAdmissible, ParameterConstraintViolated, UnknownIdentifier
from .heisenberg import HPoint, heis_norm, random_points
from .moduli import admissibility_margin, energy
from .qc import beltrami, contact_defect_norm, max_distortion, mean_distortion
from .quadratic import QUADRATIC_DIFFERENTIALS, B2, load_qd, operator_report
from .trajectories import trace

SCHEMA = 1
OK, FAILED, CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _clean(obj):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def emit(report, out):
    text = json.dumps(_clean(dict(report, schema=SCHEMA)), sort_keys=True, indent=2, allow_nan=False) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_params(path, example=None):
    if path is None:
        return example, {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read parameter file: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("params", {}), dict):
        raise ConfigError("parameter file must be {example, params: {...}}")
    file_example = data.get("example")
    if example and file_example and file_example != example:
        raise ConfigError(f"parameter file is for {file_example!r}, not {example!r}")
    params = data.get("params", {})
    for key, value in params.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"parameter {key!r} must be a number")
    return example or file_example, params


# -- commands ---------------------------------------------------------------------------
def cmd_verify(args):
    example, params = read_params(args.params, args.example)
    if example not in C.EXAMPLES:
        raise UnknownIdentifier(example)
    report = C.verify(example, params, tol=args.tol, rng=np.random.default_rng(args.seed))
    report["command"] = "verify"
    emit(report, args.out)
    return OK if report["pass"] else FAILED


def _parse_start(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--start expects 're,im,t', got {text!r}") from exc
    if len(vals) != 3:
        raise ConfigError(f"--start expects 're,im,t', got {text!r}")
    return HPoint(np.array(vals[0] + 1j * vals[1]), np.array(vals[2]))


def cmd_trace(args):
    q = load_qd(args.qd)
    start = _parse_start(args.start)
    if args.steps < 0 or not args.step_size > 0:
        raise ConfigError("--steps must be >= 0 and --step-size > 0")
    summary = {"command": "trace", "qd": args.qd, "mode": args.mode, "start": args.start,
               "steps": args.steps, "step_size": args.step_size, "partial": False}
    code = OK
    try:
        curve = trace(q, start, args.mode, orientation=args.orientation, step=args.step_size,
                      n_steps=max(args.steps, 0))
        if args.steps == 0:
            curve = curve.__class__(curve.s[:0], curve.z[:0], curve.t[:0], curve.zdot[:0], None, curve.name)
    except (HitZero, LeftDomain) as exc:
        curve = exc.partial
        summary.update(partial=True, error=f"{type(exc).__name__}: {exc}")
        code = FAILED
    text = curve.to_csv(args.csv) if curve is not None else ",".join(("s", "re_z", "im_z", "t", "re_zdot", "im_zdot",
                                                                     "legendrian_defect")) + "\n"
    if curve is None and args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    if args.csv is None:
        sys.stdout.write(text)
    summary["n_points"] = 0 if curve is None else len(curve)
    summary["csv"] = args.csv
    if args.out:
        emit(summary, args.out)
    elif summary["partial"]:
        sys.stderr.write(f"partial trajectory: {summary['error']}\n")
    return code


_FAMILY_DOMAIN = {
    "ex1_horizontal": "ex1_domain", "ex1_vertical": "ex1_domain",
    "ex2_radii": "ex2_domain", "ex2_horizontal": "ex2_domain",
    "cyl_horizontal": "cylinder",
    "ann_horizontal": "annulus", "ann_vertical": "annulus",
}


def cmd_modulus(args):
    if args.family not in _FAMILY_DOMAIN:
        raise UnknownIdentifier(args.family)
    example, params = read_params(args.params, C.example_of(args.family))
    fam = C.load(args.family, params)
    rho = C.load(args.density, params)
    domain = C.load(_FAMILY_DOMAIN[args.family], params)
    margin = admissibility_margin(rho, fam, args.grid)
    admissible = margin >= 1.0 - args.tol
    e = energy(rho, domain)
    report = {"command": "modulus", "family": fam.name, "density": rho.name, "domain": domain.name,
              "params": C.params_for(example, params), "grid": args.grid, "margin": margin, "energy": e,
              "admissible": bool(admissible), "modulus_upper_bound": e if admissible else None}
    emit(report, args.out)
    return OK if admissible else FAILED


_MAP_DENSITY = {"ex2_f0": "rho0", "cyl_f0": "rho_cyl", "radial_stretch": "rho_ann", "gD": "rho_ann"}


def cmd_distortion(args):
    example = C.example_of(args.map)
    if example is None:
        raise UnknownIdentifier(args.map)
    example, params = read_params(args.params, example)
    nm = C.load(args.map, params)
    if not isinstance(nm, C.NamedMap):
        raise UnknownIdentifier(f"{args.map} is not a map")
    rng = np.random.default_rng(args.seed)
    pts = nm.source.grid(32)
    K_max = max_distortion(nm.map, nm.source, rng=rng, grid=args.grid)
    mu = beltrami(nm.map, pts)
    base = args.map.split("(")[0].strip()
    mean = None
    if base in _MAP_DENSITY:
        rho = C.load(_MAP_DENSITY[base], params)
        mean = mean_distortion(nm.map, rho, nm.source)
    contact = float(np.max(contact_defect_norm(nm.map, pts)))
    sup = float(np.max(np.abs(mu)))
    report = {"command": "distortion", "map": args.map, "params": nm.params, "grid": args.grid,
              "K_max": K_max, "mean_distortion": mean, "contact_defect_max": contact, "beltrami_sup": sup}
    emit(report, args.out)
    return OK if contact < 1e-8 and sup < 1.0 else FAILED


def cmd_operators(args):
    if args.qd not in QUADRATIC_DIFFERENTIALS:
        raise UnknownIdentifier(args.qd)
    q = load_qd(args.qd)
    rng = np.random.default_rng(args.seed)
    pts = random_points(rng, 4 * args.points, 1.5)
    pts = pts.take(np.flatnonzero(heis_norm(pts) > 0.3)[: args.points])
    rep = operator_report(q, pts)
    report = {"command": "operators", "qd": args.qd, "points": pts.size, "tol": args.tol, **rep}
    if args.qd == "pi_dw2":
        b2 = B2(q)(pts)
        report["B2_witness_max_error"] = float(np.max(np.abs(b2 - 64 * pts.z**2 * np.conj(pts.z))))
    ok = rep["D2prime_max"] < args.tol and rep["D2second_max"] < args.tol
    report["pass"] = bool(ok)
    emit(report, args.out)
    return OK if ok else FAILED


def build_parser():
    ap = argparse.ArgumentParser(prog="hckit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, tol):
        p.add_argument("--params", help="JSON file {example, params: {...}}")
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="report path (default: stdout)")

    p = sub.add_parser("verify", help="run every check of one example")
    p.add_argument("example", nargs="?", choices=C.EXAMPLES)
    common(p, None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("trace", help="trace a trajectory to CSV")
    p.add_argument("qd", choices=sorted(QUADRATIC_DIFFERENTIALS))
    p.add_argument("--start", required=True, help="'re,im,t'")
    p.add_argument("--mode", choices=("horizontal", "vertical"), default="horizontal")
    p.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--step-size", type=float, default=1e-3)
    p.add_argument("--csv", help="CSV path (default: stdout)")
    common(p, 1e-6)
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("modulus", help="admissibility and energy of a density on a family")
    p.add_argument("family")
    p.add_argument("density")
    p.add_argument("--grid", type=int, default=64)
    common(p, 1e-9)
    p.set_defaults(fn=cmd_modulus)

    p = sub.add_parser("distortion", help="distortion report for a catalog map")
    p.add_argument("map")
    p.add_argument("--grid", type=int, default=64)
    common(p, 1e-8)
    p.set_defaults(fn=cmd_distortion)

    p = sub.add_parser("operators", help="quadratic-differential operators at random points")
    p.add_argument("qd")
    p.add_argument("--points", type=int, default=1000)
    common(p, 1e-9)
    p.set_defaults(fn=cmd_operators)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.tol is not None and not args.tol > 0:
        sys.stderr.write("hckit: --tol must be positive\n")
        return CONFIG
    try:
        return args.fn(args)
    except (ConfigError, UnknownIdentifier, ParameterConstraintViolated) as exc:
        sys.stderr.write(f"hckit: {type(exc).__name__}: {exc}\n")
        return CONFIG
    except (NotAdmissible, HCKitError) as exc:
        sys.stderr.write(f"hckit: {type(exc).__name__}: {exc}\n")
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
