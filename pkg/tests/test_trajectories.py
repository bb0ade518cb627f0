import math

import numpy as np
import pytest

from hckit import catalog as C
from hckit import jets as J
from hckit.errors import HitZero, ImageNotTrajectory, LeftDomain
from hckit.fields import WHOLE_GROUP, Domain
from hckit.heisenberg import HPoint, heis_norm
from hckit.qc import identity_map
from hckit.quadratic import load_qd
from hckit.trajectories import (CSV_COLUMNS, LegendrianCurve, align, classify, closed_form_jets,
                                curve_from_closed_form, dilation_factor, legendrian_lift, q_length, trace)

ONE = load_qd("dz2")
PI = load_qd("pi_dw2")
LOGQ = load_qd("pi_dw2_over_w2")


def pt(z, t):
    return HPoint(np.array(complex(z)), np.array(float(t)))


def test_lift_of_vertical_line():
    x, t0 = 0.7, 0.3
    s = np.linspace(0, 1.5, 40)
    c = legendrian_lift(lambda u: x + 1j * u, t0, s)
    assert np.max(np.abs(c.t - (t0 - 2 * x * s))) < 1e-12
    assert np.max(c.defect()) < 1e-8


def test_lift_of_horizontal_line():
    y, t0 = -0.4, 1.1
    s = np.linspace(-1, 2, 30)
    c = legendrian_lift(lambda u: u + 1j * y, t0, s, s0=0.0)
    assert np.max(np.abs(c.t - (t0 + 2 * s * y))) < 1e-12


def test_lift_of_circle_and_constant():
    s = np.linspace(0, 2 * np.pi, 50)
    c = legendrian_lift(lambda u: 0.5 * J.exp(1j * u), 0.0, s)
    # t' = -2 Im(conj z zdot) = -2 r^2
    assert np.max(np.abs(c.t + 0.5 * s)) < 1e-12
    c0 = legendrian_lift(lambda u: (1 + 2j) + 0 * u, 0.25, s)
    assert np.all(c0.t == 0.25)


def test_classify_examples():
    s = np.linspace(0.05, 1, 30)
    z = np.exp(0.4j)
    radius = curve_from_closed_form(lambda u: (u * z, 0.2 + 0 * u), s)
    assert classify(PI, radius) == "vertical"
    gamma = curve_from_closed_form(lambda u: (z * J.exp(-0.5j * u), u), s)
    assert classify(PI, gamma) == "horizontal"
    up = curve_from_closed_form(lambda u: (1j * u, 0 * u), s)
    assert classify(ONE, up) == "vertical"
    diag = curve_from_closed_form(lambda u: ((1 + 1j) * u, 0 * u), s)
    assert classify(ONE, diag) == "neither"


def test_trace_q_one_matches_closed_form():
    y, t0 = 0.6, -0.2
    c = trace(ONE, pt(1j * y, t0), "horizontal", step=1e-3, n_steps=1000)
    assert np.max(np.abs(c.z - (c.s + 1j * y))) < 1e-6
    assert np.max(np.abs(c.t - (t0 + 2 * c.s * y))) < 1e-6
    assert classify(ONE, c) == "horizontal" and np.max(c.defect()) < 1e-8


def test_trace_radius_of_pi_dw2():
    z0 = 0.8 * np.exp(0.7j)
    c = trace(PI, pt(z0, 0.4), "vertical", n_steps=1000)
    member = lambda u: (u * np.exp(0.7j), 0.4 + 0 * u)  # noqa: E731
    _, dist = align(c, member, 0.8, 3.0)
    assert dist < 1e-6 and classify(PI, c) == "vertical"


def test_trace_horizontal_of_pi_dw2():
    r, th = 0.9, 0.3
    member = lambda u: C._gamma_z((r, th), u)  # noqa: E731
    _, zd0, _, _, _, _ = closed_form_jets(member, np.array([0.0]))
    c = trace(PI, pt(r * np.exp(1j * th), 0.0), "horizontal", hint=zd0[0] / abs(zd0[0]))
    _, dist = align(c, member, 0.0, 2.0)
    assert dist < 1e-6


def test_trace_radial_curve_from_unit_sphere():
    # the log-coordinate horizontal curves start on the unit sphere at xi = 0
    fam = C.ann_horizontal(math.e)
    member = lambda u: fam.member((0.4, 1.0), u)  # noqa: E731
    z0, zd0, _, t0, _, _ = closed_form_jets(member, np.array([0.0]))
    assert abs(heis_norm(HPoint(z0, t0))[0] - 1) < 1e-14
    c = trace(LOGQ, HPoint(z0[0], t0[0]), "horizontal", domain=WHOLE_GROUP, hint=zd0[0] / abs(zd0[0]))
    _, dist = align(c, member, 0.0, 4.0)
    assert dist < 1e-5


def test_trace_reversal_returns_to_start():
    start = pt(0.5 + 0.3j, 0.1)
    fwd = trace(PI, start, "horizontal", n_steps=1000)
    back = trace(PI, pt(fwd.z[-1], fwd.t[-1]), "horizontal", n_steps=1000, hint=-fwd.zdot[-1])
    assert abs(back.z[-1] - start.z) < 1e-6 and abs(back.t[-1] - start.t) < 1e-6


def test_trace_stops():
    with pytest.raises(HitZero):
        trace(PI, pt(0, 0.3), "horizontal")
    with pytest.raises(HitZero) as info:
        trace(PI, pt(0.05, 0.0), "vertical", hint=-1.0, step=1e-2, n_steps=100)
    assert info.value.partial is not None and len(info.value.partial) > 1
    box = Domain("|t| < 0.05", lambda p: np.abs(p.t) < 0.05)
    with pytest.raises(LeftDomain) as info:
        trace(ONE, pt(1j, 0.0), "horizontal", domain=box)
    assert len(info.value.partial) == 25


def test_q_lengths():
    c = curve_from_closed_form(lambda u: (u + 0.5j, 1.0 * u), np.linspace(0, 2.5, 11))
    assert abs(q_length(ONE, c) - 2.5) < 1e-12
    assert q_length(ONE, curve_from_closed_form(lambda u: (u + 0j, 0 * u), np.array([1.0]))) == 0


def test_q_length_of_cylinder_horizontals():
    # horizontal trajectories of the pulled-back differential run for q-length a
    a = 1.7
    for r, th in ((0.3, 0.1), (0.9, 2.0)):
        member = lambda u: C._gamma_z((r, th), u)  # noqa: E731
        c = curve_from_closed_form(member, np.linspace(0, a, 64))
        assert abs(q_length(PI, c) - a) < 1e-10


def test_q_length_reparametrization_invariant():
    member = lambda u: C._gamma_z((0.7, 0.2), u)  # noqa: E731
    c1 = curve_from_closed_form(member, np.linspace(0, 1, 50))
    c2 = curve_from_closed_form(lambda u: member(u * u), np.linspace(0, 1, 50))
    assert abs(q_length(PI, c1) - q_length(PI, c2)) < 1e-8


def test_dilation_factor_examples():
    s = np.linspace(0, 1, 40)
    c = curve_from_closed_form(lambda u: (u + 0.3j, 0.6 * u), s)
    assert abs(dilation_factor(identity_map(), ONE, ONE, c).factor - 1) < 1e-12
    p = C.params_for("ex1")
    f = C.ex1_f0(*(p[k] for k in ("a", "b", "c", "a_p", "b_p", "c_p")))
    d = dilation_factor(f, ONE, ONE, c)
    assert abs(d.factor - p["a_p"] / p["a"]) < 1e-10 and d.image_mode == "horizontal"
    p = C.params_for("ex2")
    f = C.ex2_f0(*(p[k] for k in ("a", "b", "c", "a_p", "b_p", "c_p")))
    gamma = curve_from_closed_form(lambda u: C._gamma_z((0.8, 1.2), u), np.linspace(0, 1, 40))
    assert abs(dilation_factor(f, PI, PI, gamma).factor - p["a_p"] / p["a"]) < 1e-10


def test_dilation_factor_rejects_non_trajectory():
    diag = curve_from_closed_form(lambda u: ((1 + 1j) * u, 0 * u), np.linspace(0.1, 1, 10))
    with pytest.raises(ImageNotTrajectory):
        dilation_factor(identity_map(), ONE, ONE, diag)


def test_csv_export(tmp_path):
    c = trace(ONE, pt(0, 0), "horizontal", n_steps=5)
    text = c.to_csv(tmp_path / "c.csv")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 7
    assert (tmp_path / "c.csv").read_text() == text
    empty = LegendrianCurve([], [], [], [])
    assert empty.to_csv() == ",".join(CSV_COLUMNS) + "\n"


def test_reversed_curve():
    c = curve_from_closed_form(lambda u: C._gamma_z((0.7, 0.2), u), np.linspace(0, 1, 20))
    r = c.reversed()
    assert np.allclose(r.z, c.z[::-1]) and abs(q_length(PI, r) - q_length(PI, c)) < 1e-12
