import math

import numpy as np
import pytest

from hckit import catalog as C
from hckit import jets as J
from hckit.errors import ParameterConstraintViolated, UnknownIdentifier
from hckit.heisenberg import HPoint, heis_norm, to_log_coords
from hckit.qc import beltrami, contact_defect_norm, mean_distortion


def test_unknown_identifiers():
    for bad in ("ex4_f0", "gD(0.5)", "radial_stretch(x)", "1abc"):
        with pytest.raises(UnknownIdentifier):
            C.load(bad)
    with pytest.raises(UnknownIdentifier):
        C.params_for("ex9")


@pytest.mark.parametrize("example,params", [
    ("ex1", {"c_p": 4.0}),
    ("ex2", {"c_p": 1.0}),
    ("ex2", {"c": 7.0, "c_p": 7.0 * 1.5 / 2 * 1 / 1.5}),
    ("cyl", {"b_p": 0.5}),
    ("d", {"a_p": 3.0}),
    ("ex3", {"k": 1.5}),
    ("ex3", {"a": 0.5}),
    ("ex1", {"a": -1.0}),
])
def test_constraint_violations(example, params):
    ident = {"ex1": "ex1_f0", "ex2": "ex2_f0", "cyl": "cyl_f0", "d": "d_f0", "ex3": "gD"}[example]
    with pytest.raises(ParameterConstraintViolated):
        C.load(ident, params)


def test_inline_parameters():
    nm = C.load("gD(0.25, -0.4)")
    assert nm.params["k"] == 0.25 and nm.params["D"] == -0.4
    assert C.load("radial_stretch(0.3)").params == dict(C.DEFAULTS["ex3"], k=0.3, D=0.0)
    assert C.example_of("gD(0.5,0.1)") == "ex3"


def test_k_one_is_identity_and_d_zero_is_stretch(rng):
    P = C.annulus(2.0).sample(rng, 200)
    Q = C.gD(1.0, 0.0)(P)
    assert np.max(np.abs(Q.z - P.z)) < 1e-12 and np.max(np.abs(Q.t - P.t)) < 1e-12
    A, B = C.radial_stretch(0.4)(P), C.gD(0.4, 0.0)(P)
    assert np.max(np.abs(A.z - B.z)) == 0 and np.max(np.abs(A.t - B.t)) == 0


def test_log_map_matches_log_formula(rng):
    k, D = 0.6, 0.35
    P = C.annulus(2.0).sample(rng, 300)
    L = to_log_coords(P)
    Q = C.gD(k, D)(P)
    z, t = C._log_to_heis(*C.log_map_in_log_coords(k, D, L.xi, L.psi, L.eta))
    assert np.max(np.abs(Q.z - z)) < 1e-10 and np.max(np.abs(Q.t - t)) < 1e-10


def test_log_map_inverse_and_norm(rng):
    k, D = 0.6, 0.35
    f = C.gD(k, D)
    P = C.annulus(3.0).sample(rng, 200)
    R = f.inverse(f(P))
    assert np.max(np.abs(R.z - P.z)) < 1e-10 and np.max(np.abs(R.t - P.t)) < 1e-10
    assert np.max(np.abs(heis_norm(f(P)) - heis_norm(P) ** k)) < 1e-12


def test_maps_are_contact(rng):
    for ident in ("ex1_f0", "ex2_f0", "cyl_f0", "d_f0", "radial_stretch", "gD"):
        nm = C.load(ident)
        P = nm.source.sample(rng, 300)
        assert np.max(contact_defect_norm(nm.map, P)) < 1e-8, ident
        assert np.all(nm.target.contains(nm.map(P))), ident


@pytest.mark.parametrize("ident", ["ex1_domain", "ex2_domain", "cylinder", "d_domain", "annulus"])
def test_volume_against_monte_carlo(ident):
    dom = C.load(ident)
    rng = np.random.default_rng(7)
    n = 400_000
    P = dom.to_point(*[rng.uniform(lo, hi, n) for lo, hi in dom.ranges])
    assert np.all(dom.contains(P))
    # Monte Carlo in a bounding box of the image
    lo = np.array([P.x.min(), P.y.min(), P.t.min()])
    hi = np.array([P.x.max(), P.y.max(), P.t.max()])
    X = rng.uniform(lo, hi, (n, 3))
    frac = np.mean(dom.contains(HPoint.from_xyt(X[:, 0], X[:, 1], X[:, 2])))
    mc = frac * np.prod(hi - lo)
    assert abs(dom.volume() - mc) < 5 * math.sqrt(frac * (1 - frac) / n) * np.prod(hi - lo) + 1e-3


def test_closed_form_volumes():
    assert abs(C.cylinder(2.0, 3.0).volume() - 2 * math.pi * 3 * 2 / 2) < 1e-10
    assert abs(C.ex1_domain(2, 1, 1).volume() - 2) < 1e-12
    # the unit ball of the norm has volume pi^2 / 2
    ann = C.annulus(2.0).volume()
    assert abs(ann - (2**4 - 1) * math.pi**2 / 2) < 1e-8


def test_annulus_jacobian_from_jets(rng):
    xi, psi, eta = rng.uniform(0, 1, 20), rng.uniform(-1.4, 1.4, 20), rng.uniform(0, 4, 20)
    z, t = C._log_to_heis(*J.seed(xi, psi, eta))
    rows = [J.real(z), J.imag(z), J.real(t)]
    M = np.stack([np.stack([np.broadcast_to(np.real(g), xi.shape) for g in r.grad], -1) for r in rows], -2)
    assert np.max(np.abs(np.abs(np.linalg.det(M)) - 0.75 * np.exp(2 * xi))) < 1e-12


@pytest.mark.parametrize("example", C.EXAMPLES)
def test_verify_passes(example):
    rep = C.verify(example, rng=np.random.default_rng(0))
    failed = [c["name"] for c in rep["checks"] if not c["pass"]]
    assert rep["pass"] and not failed, failed
    assert len(rep["checks"]) >= 3


def test_verify_ex1_horizontal_factor():
    # the record holds the worst deviation from a'/a over the sampled trajectories
    rep = C.verify("ex1")
    rows = [c for c in rep["checks"] if c["name"].startswith("ex1 horizontal: q-length dilation")]
    assert len(rows) == 1 and rows[0]["value"] < 1e-6 and rows[0]["pass"]


def test_verify_d_without_map():
    rep = C.verify("d", {"a_p": 0.5, "b_p": 1.0})
    assert rep["pass"] and len(rep["checks"]) == 1
    assert "no dilating map" in rep["checks"][0]["note"]


def test_conformal_psi_breakpoint():
    f = C.gD(0.5, 0.2)
    psi = C.conformal_psi(f, 2.0)
    P = C.annulus(2.0).to_point(np.array([0.3, 1.0]), np.array([psi, psi]), np.array([0.2, 3.0]))
    assert np.max(np.abs(beltrami(f, P))) < 1e-7
    assert C.conformal_psi(C.radial_stretch(0.5), 2.0) is None
    nm = C.load("gD(0.5,0.2)")
    assert nm.source.breaks == {1: (psi,)}
    # the corner of K no longer stalls the refinement check
    assert np.isfinite(mean_distortion(nm.map, C.rho_annulus(2.0), nm.source))
