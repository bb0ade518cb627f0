"""Exit criteria of the toolkit, one test per criterion.

Each test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from hckit import catalog as C
from hckit import fields as F
from hckit import quadratic as Q
from hckit import rumin as R
from hckit.fields import WHOLE_GROUP
from hckit.heisenberg import HPoint, heis_norm, random_points
from hckit.moduli import admissibility_margin, check_distortion_inequalities, energy
from hckit.qc import contact_defect_norm, dilation, distortion, left_translation, rotation
from hckit.trajectories import classify, curve_from_closed_form, dilation_factor, map_curve, q_length, trace
from hckit.verification import _fix, _members, map_checks, trajectory_match

pytestmark = pytest.mark.acceptance


def test_c01_modulus_value(criterion):
    worst, slowest = 0.0, 0.0
    for a, b, c in ((2.0, 1.0, math.pi / 2), (1.0, 4.0, 1.0), (3.0, 2.0, math.pi)):
        t0 = time.perf_counter()
        e = energy(C.rho0(b), C.ex2_domain(a, b, c))
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, abs(e - 8 * a * c / (27 * b)) / (8 * a * c / (27 * b)))
    ok = worst < 1e-6 and slowest < 5.0
    assert criterion(1, ok, f"energy of rho0 vs 8ac/(27b): max rel error {worst:.2e}, slowest case {slowest:.2f} s")


def test_c02_admissibility_with_equality(criterion):
    a, b, c = 2.0, 1.0, math.pi / 2
    fam = C.ex2_radii(a, b, c)
    vals = fam.line_integrals(C.rho0(b), fam.grid(64))
    err = float(np.max(np.abs(vals - 1.0)))
    assert criterion(2, err < 1e-9, f"line integral of rho0 along {vals.size} radii: max |I - 1| = {err:.2e}")


def test_c03_operator_annihilation(criterion):
    rng = np.random.default_rng(3)
    pts = random_points(rng, 4000, 1.5)
    pts = pts.take(np.flatnonzero(heis_norm(pts) > 0.3)[:1000])
    worst = 0.0
    for name in ("dz2", "pi_dw2", "pi_dw2_over_w2"):
        rep = Q.operator_report(Q.load_qd(name), pts)
        worst = max(worst, rep["D2prime_max"], rep["D2second_max"])
    b2 = Q.B2(Q.load_qd("pi_dw2"))(pts)
    witness = float(np.max(np.abs(b2 - 64 * pts.z**2 * np.conj(pts.z))))
    ok = pts.size == 1000 and worst < 1e-9 and witness < 1e-10
    assert criterion(3, ok, f"max D2'/D2'' defect {worst:.2e} at {pts.size} points; B2 witness error {witness:.2e}")


def test_c04_naturality(criterion):
    rng = np.random.default_rng(4)
    poly = Q.QuadDiff(F.polynomial({(2, 1, 0): 1.0, (0, 2, 1): 0.5 - 0.25j, (1, 0, 0): 2.0j, (0, 0, 2): -1.0}),
                      "polynomial")
    qs = [Q.load_qd("dz2"), Q.load_qd("pi_dw2"), poly]
    maps = [left_translation(complex(*rng.uniform(-1, 1, 2)), rng.uniform(-1, 1)) for _ in range(3)]
    maps += [rotation(th) for th in rng.uniform(0, 2 * np.pi, 3)]
    maps += [dilation(r) for r in (0.6, 1.3, 2.1)]
    worst, nontrivial = 0.0, 0.0
    for g in maps:
        pts = random_points(rng, 1000)
        for q in qs:
            worst = max(worst, Q.naturality_defect(q, g, pts, "D2second"))
        nontrivial = max(nontrivial, float(np.max(np.abs(Q.D2second(poly)(pts)))))
    ok = worst < 1e-8 and nontrivial > 1.0
    assert criterion(4, ok, f"D2'' transport defect {worst:.2e} over {len(maps)} maps x 1000 points "
                            f"(test field has |D2''| up to {nontrivial:.1f})")


def test_c05_commutator_and_relations(criterion):
    rng = np.random.default_rng(5)
    comm, rel = 0.0, 0.0
    for _ in range(10):
        f = F.random_polynomial(rng, degree=4, n_terms=8)
        pts = random_points(rng, 100)
        d = F.Zbar(F.Z(f)) - F.Z(F.Zbar(f)) - 2j * F.T(f)
        comm = max(comm, float(np.max(np.abs(d(pts)))))
        rel = max(rel, max(R.identity_suite(f, pts).values()))
    ok = comm < 1e-12 and rel < 1e-8
    assert criterion(5, ok, f"commutator defect {comm:.2e}; Rumin relation defects {rel:.2e} (10 fields x 100 points)")


def test_c06_trajectory_closed_forms(criterion):
    one, pi, logq = Q.load_qd("dz2"), Q.load_qd("pi_dw2"), Q.load_qd("pi_dw2_over_w2")
    ex1_h, ex1_v = C.ex1_horizontal(2, 1, 1), C.ex1_vertical(2, 1, 1)
    radii, ex2_h = C.ex2_radii(2, 1, math.pi / 2), C.ex2_horizontal(2, 1, math.pi / 2)
    ann_h, ann_v = C.ann_horizontal(2.0), C.ann_vertical(2.0)
    cases = [
        (one, _fix(ex1_h.member, (0.4, 0.2)), 0.0, 2.0, "horizontal"),
        (one, _fix(ex1_v.member, (1.3, -0.5)), 0.0, 2.0, "vertical"),
        (pi, _fix(ex2_h.member, (0.8, 0.5)), 0.2, 2.2, "horizontal"),
        (pi, _fix(radii.member, (0.5, 0.3)), 0.2, 1.3, "vertical"),
        (logq, _fix(ann_h.member, (0.3, 0.5)), 0.2, 3.5, "horizontal"),
        (logq, _fix(ann_v.member, (0.5, 0.7)), -0.5, np.pi / 2 - 1e-6, "vertical"),
    ]
    dists = [trajectory_match("c6", q, m, s0, hi, mode, step=1e-3, n_steps=1000)["value"]
             for q, m, s0, hi, mode in cases]
    worst = max(dists)
    assert criterion(6, worst < 1e-5, f"sup distance traced vs closed form over {len(cases)} trajectories "
                                      f"(rectangle, sector and annulus families, RK4 1e-3 x 1000): {worst:.2e}")


def test_c07_q_lengths(criterion):
    pi = Q.load_qd("pi_dw2")
    worst = 0.0
    for a, b in ((1.0, 1.0), (2.5, 0.7)):
        fam = C.cyl_horizontal(a, b)
        for params in zip(*fam.grid(5)):
            c = curve_from_closed_form(_fix(fam.member, params), np.linspace(0.0, a, 65))
            worst = max(worst, abs(q_length(pi, c) - a))
        for r0, th in ((0.3 * math.sqrt(b), 0.2), (0.9 * math.sqrt(b), 4.0)):
            n = 1000
            z0 = r0 * np.exp(1j * th)
            c = trace(pi, HPoint(z0, 0.0), "horizontal", step=a / (2 * r0 * n), n_steps=n, domain=WHOLE_GROUP,
                      hint=-1j * z0 / abs(z0))
            worst = max(worst, abs(q_length(pi, c) - a), abs(c.t[-1] - a))
    assert criterion(7, worst < 1e-6, f"q-length of horizontal trajectories vs a (closed form and traced): "
                                      f"max error {worst:.2e}")


def test_c08_dilation_factors(criterion):
    one, pi, logq = Q.load_qd("dz2"), Q.load_qd("pi_dw2"), Q.load_qd("pi_dw2_over_w2")
    p1, p2, p3 = C.params_for("ex1"), C.params_for("ex2"), C.params_for("ex3")
    ex1, ex2, fk = C.named_ex1(p1), C.named_ex2(p2), C.named_log_map(p3, 0.0)

    def worst(f, q, fam, want):
        facs = [dilation_factor(f, q, q, c).factor for c in _members(fam)]
        return max(abs(x - want) for x in facs), len(facs)

    e1, n1 = worst(ex1.map, one, C.ex1_horizontal(**p1), p1["a_p"] / p1["a"])
    e2, n2 = worst(ex2.map, pi, C.ex2_horizontal(**p2), p2["a_p"] / p2["a"])
    e3, n3 = worst(fk.map, logq, C.ann_horizontal(p3["a"]), p3["k"])
    # vertical: f0 sends delta_{z,t}(s) to delta_{z',t'}(sigma s)
    sig, ratios = [], []
    for c in _members(C.ex2_radii(**p2)):
        img = map_curve(ex2.map, c)
        assert classify(pi, img) == "vertical"
        sig.append(np.abs(img.z) / np.abs(c.z))
        ratios.append(q_length(pi, img) / q_length(pi, c))
    sig = np.concatenate(sig)
    ev = float(np.max(np.abs(sig - math.sqrt(p2["b_p"] / p2["b"]))))
    n = min(n1, n2, n3, len(ratios))
    ok = max(e1, e2, e3, ev) < 1e-6 and n >= 20
    assert criterion(8, ok, f"max errors over >= {n} trajectories: ex1 horizontal a'/a {e1:.1e}, ex2 horizontal "
                            f"a'/a {e2:.1e}, ex2 vertical parameter factor sqrt(b'/b) {ev:.1e} "
                            f"(q-length ratio {np.mean(ratios):.6f} = b'/b), f_k horizontal k {e3:.1e}")


def test_c09_distortion_constants(criterion):
    p2 = C.params_for("ex2")
    nm = C.named_ex2(p2)
    kappa = p2["a_p"] * p2["b"] / (p2["a"] * p2["b_p"])
    K2 = distortion(nm.map, nm.source.grid(32)) ** 2
    e2 = float(np.max(np.abs(K2 - max(kappa**2, kappa**-2))))
    p1 = C.params_for("ex1")
    n1 = C.named_ex1(p1)
    K1 = distortion(n1.map, n1.source.grid(32))
    e1 = float(np.ptp(K1))
    ok = e2 < 1e-8 and e1 < 1e-10
    assert criterion(9, ok, f"ex2 K^2 vs max(kappa^2, kappa^-2) on 32^3 grid: {e2:.2e}; ex1 K spread {e1:.2e}")


def test_c10_contact_and_beltrami(criterion):
    rows = []
    for ident in ("ex1_f0", "ex2_f0", "cyl_f0", "d_f0", "radial_stretch", "gD"):
        rows += map_checks(C.load(ident))
    wanted = [r for r in rows if "image inside" not in r["name"] and "Im lambda" not in r["name"]]
    contact = max(r["value"] for r in wanted if "contact" in r["name"])
    belt = max(r["value"] for r in wanted if "Beltrami" in r["name"])
    mu = max(r["value"] for r in wanted if "|mu|" in r["name"])
    ok = all(r["pass"] for r in wanted)
    assert criterion(10, ok, f"6 catalog maps on 32^3 grids: contact defect {contact:.2e}, "
                             f"second Beltrami defect {belt:.2e}, sup |mu| {mu:.4f}")


def test_c11_natural_chart(criterion):
    q = Q.load_qd("dz2")
    base = HPoint(np.array(0j), np.array(0.0))
    ax = np.linspace(-0.4, 0.4, 7)
    x, y, t = np.meshgrid(ax, ax, ax, indexing="ij")
    P = HPoint.from_xyt(x.ravel(), y.ravel(), t.ravel())
    chart = Q.NaturalChart(q, base)
    f = chart.f
    zf = float(np.max(np.abs(F.eval_Z(f, P) ** 2 - 1)))
    zbf = float(np.max(np.abs(F.eval_Zbar(f, P))))
    contact = float(np.max(contact_defect_norm(chart.as_map(), P)))
    ident = max(float(np.max(np.abs(f(P) - P.z))), float(np.max(np.abs(chart.h(P) - P.t))))
    vals = {name: Q.natural_chart(q, base, path=name) for name in ("t_first", "z_first")}
    (f1, h1), (f2, h2) = vals.values()
    # charts agree up to a sign and a left translation; both fix the base, so the translation is trivial
    paths = min(max(float(np.max(np.abs(f2(P) - s * f1(P)))), float(np.max(np.abs(h2(P) - h1(P)))))
                for s in (1, -1))
    ok = zf < 1e-6 and zbf < 1e-6 and contact < 1e-6 and paths < 1e-6 and ident < 1e-6
    assert criterion(11, ok, f"q = 1 at (0,0): |(Zf)^2 - 1| {zf:.1e}, |Zbar f| {zbf:.1e}, contact {contact:.1e}, "
                             f"distance to (z,t) {ident:.1e}, path disagreement {paths:.1e}")


def test_c12_distortion_inequalities(criterion):
    rng = np.random.default_rng(12)
    p2 = C.params_for("ex2")
    ex2 = C.named_ex2(p2)
    r2 = check_distortion_inequalities(ex2.map, C.ex2_radii(**p2), C.rho0(p2["b"]), C.rho0(p2["b_p"]),
                                       ex2.source, ex2.target, slack=1e-6, rng=rng)
    p3 = C.params_for("ex3")
    fk = C.named_log_map(p3, 0.0)
    r3 = check_distortion_inequalities(fk.map, C.ann_horizontal(p3["a"]), C.rho_annulus(p3["a"]),
                                       C.rho_annulus(p3["a"] ** p3["k"]), fk.source, fk.target, slack=1e-6, rng=rng)
    rows = r2["inequalities"] + r3["inequalities"]
    ok = all(r["holds"] for r in rows)
    gaps = ", ".join(f"{r['rhs'] - r['lhs']:.3g}" for r in rows)
    assert criterion(12, ok, f"{sum(r['holds'] for r in rows)}/{len(rows)} inequalities hold "
                             f"(ex2 f0 then f_k; rhs - lhs: {gaps})")


def test_c13_determinism(criterion, tmp_path):
    commands = [
        ["verify", "ex2", "--seed", "7"],
        ["operators", "pi_dw2", "--seed", "7"],
        ["distortion", "gD", "--seed", "7", "--grid", "16"],
        ["modulus", "ex2_radii", "rho0"],
        ["trace", "pi_dw2", "--start", "0.5,0.2,0", "--steps", "200"],
    ]
    same = 0
    for k, cmd in enumerate(commands):
        outs = []
        for rep in range(2):
            path = tmp_path / f"{k}_{rep}.out"
            args = [sys.executable, "-m", "hckit.cli", *cmd]
            args += ["--csv", str(path)] if cmd[0] == "trace" else ["--out", str(path)]
            subprocess.run(args, check=True, capture_output=True)
            outs.append(path.read_bytes())
        same += outs[0] == outs[1] and len(outs[0]) > 0
    assert criterion(13, same == len(commands), f"{same}/{len(commands)} CLI commands byte-identical across two runs")
