"""Per-example verification suites returning JSON-ready reports.

A check is a record ``{name, value, expected, tol, pass}``; ``value`` is
the measured quantity and ``pass`` compares it with ``expected`` (or with
the bound ``tol`` when ``expected`` is None).
"""
from __future__ import annotations

import math

import numpy as np

from . import catalog as C
from . import jets as J
from .errors import HCKitError
from .heisenberg import HPoint, LogCoords, from_log_coords, to_log_coords
from .moduli import admissibility_margin, check_distortion_inequalities, energy
from .parallel import ordered_map
from .qc import beltrami_system, contact_defect, distortion, mean_distortion, rotation
from .quadratic import load_qd
from .trajectories import (align, classify, closed_form_jets, curve_from_closed_form, dilation_factor,
                           map_curve, q_length, trace)

DEFAULT_TOL = 1e-6
CONTACT_TOL = 1e-8
LAMBDA_TOL = 1e-10
BELTRAMI_TOL = 1e-8
MATCH_TOL = 1e-5
N_TRAJ = 5  # per parameter axis, so 25 trajectories


def check(name, value, expected=None, tol=DEFAULT_TOL, relative=False, passed=None):
    value = float(value)
    if passed is None:
        if expected is None:
            passed = value < tol
        else:
            err = abs(value - expected)
            passed = err <= tol * (abs(expected) if relative else 1.0)
    return {"name": name, "value": value, "expected": None if expected is None else float(expected),
            "tol": float(tol), "pass": bool(passed)}


def _guard(name, fn):
    """Run a check group; an exception becomes a failed record."""
    try:
        return fn()
    except HCKitError as exc:
        return [{"name": name, "value": None, "expected": None, "tol": None, "pass": False,
                 "error": f"{type(exc).__name__}: {exc}"}]


# -- shared groups --------------------------------------------------------------------
def map_checks(nm, n=32):
    """Contact, real multiplier, Beltrami system and image containment on an n^3 grid."""
    f, P = nm.map, nm.source.grid(n)
    a, b, lam = contact_defect(f, P)
    mu, bdef = beltrami_system(f, P, floor=0.0)
    from .qc import _MapJets

    big = np.abs(_MapJets(f, P).Zf1) > 1e-6
    inside = np.mean(nm.target.contains(f(P)))
    tag = nm.identifier
    return [
        check(f"{tag}: contact defect max", np.max(np.maximum(np.abs(a), np.abs(b))), tol=CONTACT_TOL),
        check(f"{tag}: |Im lambda| max", np.max(np.abs(lam.imag)), tol=LAMBDA_TOL),
        check(f"{tag}: second Beltrami defect max", np.max(np.abs(bdef[big]), initial=0.0), tol=BELTRAMI_TOL),
        check(f"{tag}: |mu| sup < 1", np.max(np.abs(mu)), passed=bool(np.max(np.abs(mu)) < 1.0), tol=1.0),
        check(f"{tag}: image inside target (fraction)", inside, 1.0, tol=0.0),
    ]


def _members(fam, n=N_TRAJ, trim=1e-3, n_samples=201):
    """Closed-form curves over an n x n parameter grid, ends trimmed off zeros of q."""
    out = []
    for params in zip(*fam.grid(n)):
        lo, hi = (float(v) for v in fam.s_range(*[np.float64(p) for p in params]))
        d = trim * (hi - lo)
        s = np.linspace(lo + d, hi - d, n_samples)
        member = _fix(fam.member, params)
        out.append(curve_from_closed_form(member, s, f"{fam.name}{tuple(round(float(p), 6) for p in params)}"))
    return out


def _fix(member, params):
    params = tuple(float(p) for p in params)
    return lambda s: member(params, s)


def dilation_checks(tag, f, q, fam, expected, tol):
    factors = [dilation_factor(f, q, q, c).factor for c in _members(fam)]
    err = max(abs(x - expected) for x in factors)
    return [check(f"{tag}: q-length dilation over {len(factors)} trajectories (max error)", err, None, tol)]


def image_match(tag, f, fam, image_member, tol=1e-9, n=N_TRAJ):
    """Pointwise distance between f(member(p, s)) and the stated image curve."""
    worst = 0.0
    for params in zip(*fam.grid(n)):
        lo, hi = (float(v) for v in fam.s_range(*[np.float64(p) for p in params]))
        s = np.linspace(lo, hi, 101)[1:-1]
        z, t = fam.member(tuple(float(p) for p in params), s)
        img = f(HPoint(np.asarray(z, dtype=complex), np.real(t)))
        z2, t2 = image_member(tuple(float(p) for p in params), s)
        worst = max(worst, float(np.max(np.abs(img.z - z2))), float(np.max(np.abs(img.t - t2))))
    return [check(f"{tag}: image equals stated trajectory (max distance)", worst, None, tol)]


def trajectory_match(tag, q, member, s0, hi, mode, hint=None, step=1e-3, n_steps=1000):
    """Trace from member(s0) and compare with the closed form after alignment."""
    z0, zd0, _, t0, _, _ = closed_form_jets(member, np.array([s0]))
    hint = zd0[0] / abs(zd0[0]) if hint is None else hint
    from .fields import WHOLE_GROUP

    c = trace(q, HPoint(z0, t0), mode, step=step, n_steps=n_steps, domain=WHOLE_GROUP, hint=hint)
    _, dist = align(c, member, s0, hi)
    return check(f"{tag}: traced {mode} trajectory vs closed form (sup distance)", dist, None, MATCH_TOL)


def modulus_checks(tag, fam, rho, domain, expected, grid=32):
    margin = admissibility_margin(rho, fam, grid)
    e = energy(rho, domain)
    return [
        check(f"{tag}: admissibility margin of {rho.name}", margin, 1.0, tol=1e-9),
        check(f"{tag}: energy of {rho.name}", e, expected, tol=1e-6, relative=True),
    ]


def inequality_checks(tag, f, fam, rho_src, rho_dst, dom_src, dom_dst, rng, K_grid=64):
    rep = check_distortion_inequalities(f, fam, rho_src, rho_dst, dom_src, dom_dst, slack=1e-6,
                                        rng=rng, K_grid=K_grid)
    out = []
    for row in rep["inequalities"]:
        out.append(check(f"{tag}: {row['name']}", row["rhs"] - row["lhs"], passed=row["holds"], tol=1e-6))
    return out, rep


# -- examples ---------------------------------------------------------------------------
def k_const(nm, want):
    K = distortion(nm.map, nm.source.grid(32))
    return [check("ex1: K spread on 32^3 grid", np.ptp(K), None, 1e-10),
            check("ex1: K constant value", np.mean(K), want, 1e-10)]


def _ex1(p, tol, rng):
    nm = C.named_ex1(p)
    q = load_qd("dz2")
    sx, sy = p["a_p"] / p["a"], p["b_p"] / p["b"]
    hfam, vfam = C.ex1_horizontal(**p), C.ex1_vertical(**p)
    groups = [
        lambda: map_checks(nm),
        lambda: k_const(nm, max(sx, sy) / min(sx, sy)),
        lambda: dilation_checks("ex1 horizontal", nm.map, q, hfam, sx, tol),
        lambda: dilation_checks("ex1 vertical", nm.map, q, vfam, sy, tol),
        lambda: image_match("ex1 horizontal", nm.map, hfam,
                            lambda pp, s: (sx * s + 1j * sy * pp[0], sx * sy * (pp[1] + 2 * s * pp[0]))),
        lambda: [trajectory_match("ex1", q, _fix(hfam.member, (0.4, 0.3)), 0.1, 1.6, "horizontal"),
                 trajectory_match("ex1", q, _fix(vfam.member, (0.7, 0.3)), 0.05, 1.6, "vertical")],
    ]
    return groups


def _ex2(p, tol, rng):
    nm = C.named_ex2(p)
    q = load_qd("pi_dw2")
    a, b, c, a_p, b_p, c_p = (p[k] for k in ("a", "b", "c", "a_p", "b_p", "c_p"))
    kappa = a_p * b / (a * b_p)
    radii = C.ex2_radii(**p)
    hfam = C.ex2_horizontal(**p)
    P = nm.source.grid(32)

    def k_checks():
        K2 = distortion(nm.map, P) ** 2
        want = max(kappa**2, kappa**-2)
        return [check("ex2: K^2 uniform on 32^3 grid (max error)", np.max(np.abs(K2 - want)), None, 1e-8)]

    def vertical():
        # the radius delta_{z,t}(s) maps to delta_{z',t'}(sigma s); sigma is the parameter factor
        sig, ratios = [], []
        for cv in _members(radii):
            img = map_curve(nm.map, cv)
            if classify(q, img) != "vertical":
                return [check("ex2 vertical: image of a radius is vertical", 0.0, 1.0, 0.0)]
            sig.append(np.abs(img.z) / np.abs(cv.z))
            ratios.append(q_length(q, img) / q_length(q, cv))
        sig = np.concatenate(sig)
        return [
            check("ex2 vertical: parameter dilation sqrt(b'/b) (max error)",
                  np.max(np.abs(sig - math.sqrt(b_p / b))), None, tol),
            check("ex2 vertical: q-length ratio b'/b (max error)", max(abs(r - b_p / b) for r in ratios), None, tol),
        ]

    def image_h(pp, s):
        z = math.sqrt(b_p / b) * pp[0] * np.exp(1j * kappa * pp[1])
        return z * np.exp(-0.5j * (a_p / a) * s / abs(z) ** 2), (a_p / a) * s

    def ineq():
        out, _ = inequality_checks("ex2 modulus inequality", nm.map, radii, C.rho0(b), C.rho0(b_p, "rho0_target"),
                                   nm.source, nm.target, rng)
        return out

    return [
        lambda: map_checks(nm),
        k_checks,
        lambda: modulus_checks("ex2", radii, C.rho0(b), nm.source, 8 * a * c / (27 * b)),
        lambda: modulus_checks("ex2 image", radii.mapped(nm.map), C.rho0(b_p, "rho0_target"), nm.target,
                               8 * a_p * c_p / (27 * b_p)),
        lambda: dilation_checks("ex2 horizontal", nm.map, q, hfam, a_p / a, tol),
        lambda: image_match("ex2 horizontal", nm.map, hfam, image_h),
        vertical,
        ineq,
        lambda: [trajectory_match("ex2", q, _fix(hfam.member, (0.8, 0.5)), 0.2, 2.2, "horizontal"),
                 trajectory_match("ex2", q, _fix(radii.member, (0.5, 0.3)), 0.2, 1.3, "vertical")],
    ]


def _cyl(p, tol, rng):
    nm = C.named_cyl(p)
    q = load_qd("pi_dw2")
    a, b, a_p, b_p = (p[k] for k in ("a", "b", "a_p", "b_p"))
    hfam = C.cyl_horizontal(a, b)

    def zprime(z):
        return math.sqrt(b_p) * z / np.sqrt(C.cyl_radicand(a, b, a_p, b_p, abs(z) ** 2))

    def image_h(pp, s):
        z1 = zprime(pp[0] * np.exp(1j * pp[1]))
        return z1 * np.exp(-0.5j * (a_p / a) * s / abs(z1) ** 2), (a_p / a) * s

    def radicand():
        r2 = np.linspace(0.0, b, 10_001)
        return [check("cyl: radicand minimum on [0, b] (must be > 0)",
                      np.min(C.cyl_radicand(a, b, a_p, b_p, r2)), passed=bool(np.min(C.cyl_radicand(a, b, a_p, b_p, r2)) > 0))]

    def vertical():
        # delta_{z,t}(s) -> delta_{z e^{i phase t}, a't/a}(sqrt(b') s / sqrt(radicand(s^2)))
        worst = 0.0
        phase = (1.0 - a_p * b / (a * b_p)) / (2.0 * b)
        for th in np.linspace(0.1, 6.0, 5):
            for t in np.linspace(0.1, a - 0.1, 5):
                s = np.linspace(1e-3, math.sqrt(b) - 1e-3, 101)
                img = nm.map(HPoint(s * np.exp(1j * th), np.full_like(s, t)))
                sig = math.sqrt(b_p) * s / np.sqrt(C.cyl_radicand(a, b, a_p, b_p, s * s))
                want = sig * np.exp(1j * (th + phase * t))
                worst = max(worst, np.max(np.abs(img.z - want)), np.max(np.abs(img.t - a_p * t / a)))
        return [check("cyl vertical: image equals stated radius (max distance)", worst, None, 1e-9)]

    def q_length_a():
        # horizontal trajectories of the lifted rectangle differential run from t = 0 to t = a
        out = []
        for r0 in (0.3, 0.6, 0.9):
            z0 = r0 * np.exp(0.4j)
            n = 1000
            c = trace(q, HPoint(z0, 0.0), "horizontal", step=a / (2 * r0 * n), n_steps=n,
                      hint=-1j * z0 / abs(z0))
            out.append(check(f"cyl: q-length of traced trajectory from |z|={r0}", q_length(q, c), a, tol))
            out.append(check(f"cyl: traced trajectory ends at t = a (|z|={r0})", c.t[-1], a, tol))
        return out

    return [
        lambda: map_checks(nm),
        radicand,
        lambda: dilation_checks("cyl horizontal", nm.map, q, hfam, a_p / a, tol),
        lambda: image_match("cyl horizontal", nm.map, hfam, image_h),
        vertical,
        q_length_a,
        lambda: modulus_checks("cyl", hfam, C.rho_cylinder(a), nm.source, 16 * math.pi * b**3 / (3 * a**3)),
    ]


def _d(p, tol, rng):
    C.check_d(p, need_map=False)
    exists = C.d_map_exists(p)
    lhs = p["a"] * p["b"] / (p["b"] + 1)
    rhs = p["a_p"] * p["b_p"] / (p["b_p"] + 1)
    head = [{"name": "d: existence condition ab/(b+1) = a'b'/(b'+1)", "value": lhs, "expected": rhs,
             "tol": C.CONSTRAINT_RTOL, "pass": True,
             "note": "dilating map exists" if exists else "no dilating map exists; map checks skipped"}]
    if not exists:
        return [lambda: head]
    nm = C.named_d(p)
    q = load_qd("pi_dw2")
    hfam = C.CurveFamily("d_horizontal", C._gamma_z, [(1.0, math.sqrt(p["b"] + 1)), (0, 2 * np.pi)],
                         lambda r, th: (0.0 * r, p["a"] + 0.0 * r))

    def walls():
        th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        t = np.linspace(0.01, p["a"] - 0.01, 64)
        th, t = np.meshgrid(th, t)
        inner = nm.map(HPoint(np.exp(1j * th), t))
        outer = nm.map(HPoint(math.sqrt(p["b"] + 1) * np.exp(1j * th), t))
        return [check("d: inner wall maps to inner wall (max error of |z|^2)", np.max(np.abs(np.abs(inner.z) ** 2 - 1)),
                      None, 1e-10),
                check("d: outer wall maps to outer wall (max error of |z|^2)",
                      np.max(np.abs(np.abs(outer.z) ** 2 - (p["b_p"] + 1))), None, 1e-10)]

    return [lambda: head, lambda: map_checks(nm), walls,
            lambda: dilation_checks("d horizontal", nm.map, q, hfam, p["a_p"] / p["a"], tol)]


def _ex3(p, tol, rng):
    a, k, D = p["a"], p["k"], p["D"]
    fk = C.named_log_map(p, 0.0)
    gd = C.named_log_map(p)
    q = load_qd("pi_dw2_over_w2")
    hfam, vfam = C.ann_horizontal(a), C.ann_vertical(a)
    rot = rotation(0.7)

    def image_f(pp, s):
        return C._log_to_heis(k * s, np.arctan(np.tan(pp[0]) / k), pp[1] - np.tan(pp[0]) * s / 3)

    def image_g(pp, s):
        psi1 = np.arctan(np.tan(pp[0]) / k + D)
        return C._log_to_heis(k * s, psi1, pp[1] - np.tan(psi1) * k * s / 3)

    def image_v(pp, s):
        return C._log_to_heis(k * pp[0] + 0.0 * s, np.arctan(np.tan(s) / k), pp[1] + 0.0 * s)

    def vertical():
        kinds = {classify(q, map_curve(fk.map, c)) for c in _members(vfam)}
        return [check("ex3: f_k sends vertical trajectories to vertical ones", float(kinds == {"vertical"}), 1.0, 0.0)]

    def log_formula():
        # the Heisenberg-coordinate maps against their defining formulas in log coordinates
        P = fk.source.sample(rng, 2000)
        L = to_log_coords(P)
        out = []
        for nm, DD in ((fk, 0.0), (gd, D)):
            Q = from_log_coords(LogCoords(*C.log_map_in_log_coords(k, DD, L.xi, L.psi, L.eta)))
            M = nm.map(P)
            out.append(check(f"ex3: {nm.identifier} matches its log-coordinate formula",
                             max(np.max(np.abs(M.z - Q.z)), np.max(np.abs(M.t - Q.t))), None, 1e-10))
        A, B = fk.map(P), C.gD(k, 0.0)(P)
        out.append(check("ex3: g_D with D = 0 equals f_k", max(np.max(np.abs(A.z - B.z)), np.max(np.abs(A.t - B.t))),
                         None, 1e-10))
        return out

    def rotated():
        g_rot = gd.map.compose(rot)
        nm = C.NamedMap("gD o rotation", g_rot, p, gd.source, gd.target, k)
        base = dilation_checks("ex3 g_D o rotation horizontal", g_rot, q, hfam, k, tol)
        return map_checks(nm) + base

    def log_params():
        out = []
        from .fields import WHOLE_GROUP

        for psi, eta in ((0.3, 0.5), (-0.6, 1.9)):
            member = _fix(hfam.member, (psi, eta))
            z0, zd0, _, t0, _, _ = closed_form_jets(member, np.array([0.2]))
            c = trace(q, HPoint(z0, t0), "horizontal", n_steps=1000, domain=WHOLE_GROUP, hint=zd0[0] / abs(zd0[0]))
            L = to_log_coords(c.points)
            inv = np.angle(np.exp(1.5j * (L.eta + np.tan(L.psi) * L.xi / 3 - eta)))
            out.append(check(f"ex3: traced horizontal in log coords, psi constant ({psi})",
                             np.max(np.abs(L.psi - psi)), None, 1e-6))
            out.append(check(f"ex3: traced horizontal in log coords, eta + xi tan(psi)/3 constant ({psi})",
                             np.max(np.abs(inv)) / 1.5, None, 1e-6))
        for xi, eta in ((0.4, 0.5), (1.0, 2.5)):
            member = _fix(vfam.member, (xi, eta))
            z0, zd0, _, t0, _, _ = closed_form_jets(member, np.array([-0.5]))
            c = trace(q, HPoint(z0, t0), "vertical", n_steps=1000, domain=WHOLE_GROUP, hint=zd0[0] / abs(zd0[0]))
            L = to_log_coords(c.points)
            out.append(check(f"ex3: traced vertical in log coords, xi constant ({xi})", np.max(np.abs(L.xi - xi)),
                             None, 1e-6))
            d_eta = np.angle(np.exp(1.5j * (L.eta - eta))) / 1.5
            out.append(check(f"ex3: traced vertical in log coords, eta constant ({xi})", np.max(np.abs(d_eta)),
                             None, 1e-6))
        return out

    def trajectories():
        return [trajectory_match("ex3", q, _fix(hfam.member, (0.3, 0.5)), 0.2, 3.5, "horizontal"),
                trajectory_match("ex3", q, _fix(vfam.member, (0.5, 0.7)), -0.5, np.pi / 2 - 1e-6, "vertical")]

    def ineq():
        out, _ = inequality_checks("ex3 modulus inequality", fk.map, hfam, C.rho_annulus(a),
                                   C.rho_annulus(a**k, "rho_ann_target"), fk.source, fk.target, rng)
        return out

    def mean():
        rho = C.rho_annulus(a)
        m0 = mean_distortion(fk.map, rho, fk.source)
        m1 = mean_distortion(fk.map.compose(rot), rho, fk.source)
        return [check("ex3: mean distortion of f_k is finite", m0, passed=bool(np.isfinite(m0)), tol=np.inf),
                check("ex3: mean distortion invariant under vertical rotation", abs(m1 - m0), None, 1e-8)]

    return [
        lambda: map_checks(fk),
        lambda: map_checks(gd),
        lambda: modulus_checks("ex3", hfam, C.rho_annulus(a), fk.source, math.pi**2 / math.log(a) ** 3),
        lambda: dilation_checks("ex3 f_k horizontal", fk.map, q, hfam, k, tol),
        lambda: image_match("ex3 f_k horizontal", fk.map, hfam, image_f),
        lambda: image_match("ex3 f_k vertical", fk.map, vfam, image_v),
        vertical,
        lambda: dilation_checks("ex3 g_D horizontal", gd.map, q, hfam, k, tol),
        lambda: image_match("ex3 g_D horizontal", gd.map, hfam, image_g),
        log_formula,
        rotated,
        log_params,
        trajectories,
        mean,
        ineq,
    ]


SUITES = {"ex1": _ex1, "ex2": _ex2, "ex3": _ex3, "cyl": _cyl, "d": _d}


def verify_example(example, params=None, tol=None, rng=None):
    """Report ``{example, params, checks, pass}``; check failures never raise."""
    if example not in SUITES:
        from .errors import UnknownIdentifier

        raise UnknownIdentifier(example)
    p = C.params_for(example, params)
    tol = DEFAULT_TOL if tol is None else float(tol)
    rng = np.random.default_rng(0) if rng is None else rng
    groups = SUITES[example](p, tol, rng)
    results = ordered_map(lambda g: _guard(getattr(g, "__name__", "check"), g), groups)
    checks = [c for group in results for c in group]
    return {"example": example, "params": p, "checks": checks, "pass": all(c["pass"] for c in checks)}
