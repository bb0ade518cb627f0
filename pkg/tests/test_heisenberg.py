import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hckit.errors import OriginNotRepresentable
from hckit.heisenberg import (ETA_PERIOD, CylCoords, HPoint, LogCoords, from_cylindrical, from_log_coords,
                              group_inv, group_mul, heis_dist, heis_norm, to_cylindrical, to_log_coords)

coord = st.floats(-5, 5, allow_nan=False)


def pt(x, y, t):
    return HPoint(np.array(x + 1j * y), np.array(t))


def test_product_example():
    p = group_mul(pt(1, 0, 0), pt(0, 1, 0))
    assert p.z == 1 + 1j and p.t == -2


def test_product_is_not_commutative():
    a, b = pt(1, 0, 0), pt(0, 1, 0)
    assert group_mul(a, b).t == -group_mul(b, a).t != 0


def test_center_and_inverse():
    assert group_mul(pt(0, 0, 1.5), pt(0, 0, 2.0)).t == 3.5
    inv = group_inv(pt(1, 0, 2))
    assert inv.z == -1 and inv.t == -2
    inv = group_inv(pt(0, 1, -3))
    assert inv.z == -1j and inv.t == 3


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord, coord, coord, coord, coord, coord, coord)
def test_associativity(a, b, c, d, e, f, g, h, i):
    p, q, r = pt(a, b, c), pt(d, e, f), pt(g, h, i)
    lhs, rhs = group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r))
    assert abs(lhs.z - rhs.z) < 1e-12 and abs(lhs.t - rhs.t) < 1e-10


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord)
def test_inverse_property(a, b, c):
    p = pt(a, b, c)
    e = group_mul(p, group_inv(p))
    assert e.z == 0 and abs(e.t) < 1e-12


def test_norm_examples():
    # (0 + 4^2)^(1/4) = 2
    assert heis_norm(pt(0, 0, 4)) == pytest.approx(2.0, abs=1e-15)
    assert heis_norm(pt(1, 0, 0)) == 1
    assert heis_dist(pt(0, 0, 0), pt(0, 0, 4)) == pytest.approx(2.0)
    p = pt(0.3, -1, 2)
    assert heis_dist(p, p) == 0


def test_left_invariance(rng):
    def rand():
        return HPoint.from_xyt(*rng.uniform(-3, 3, size=(3, 1000)))

    g, p, q = rand(), rand(), rand()
    d = heis_dist(group_mul(g, p), group_mul(g, q)) - heis_dist(p, q)
    assert np.max(np.abs(d)) < 1e-10


def test_log_coords_examples():
    p = from_log_coords(LogCoords(0.0, 0.0, 0.0))
    assert abs(p.z - 1j) < 1e-15 and abs(p.t) < 1e-15
    for s in (1, -1):
        p = from_log_coords(LogCoords(0.7, s * np.pi / 2, 0.2))
        assert abs(p.z) < 1e-7 and p.t == pytest.approx(-s * np.exp(0.7))


def test_log_coords_norm(rng):
    xi, psi, eta = rng.uniform(-2, 2, 500), rng.uniform(-np.pi / 2, np.pi / 2, 500), rng.uniform(-9, 9, 500)
    p = from_log_coords(LogCoords(xi, psi, eta))
    assert np.max(np.abs(heis_norm(p) - np.exp(xi / 2))) < 1e-12


def test_log_coords_round_trip(rng):
    n = rng.uniform(1, 10, 100)
    raw = HPoint.from_xyt(*rng.normal(size=(3, 100)))
    p = HPoint(raw.z * n / heis_norm(raw), raw.t * n**2 / heis_norm(raw) ** 2)
    c = to_log_coords(p)
    q = from_log_coords(c)
    assert np.max(np.abs(q.z - p.z)) < 1e-10 and np.max(np.abs(q.t - p.t)) < 1e-9
    # folded window: psi - 3 pi <= 3 eta < psi + pi, inside psi - 3 pi <= 2 eta < psi + pi
    assert np.all(c.psi - 3 * np.pi <= 3 * c.eta + 1e-12) and np.all(3 * c.eta < c.psi + np.pi)
    assert np.all(c.psi - 3 * np.pi <= 2 * c.eta + 1e-12) and np.all(2 * c.eta < c.psi + np.pi)


def test_eta_period():
    a = from_log_coords(LogCoords(0.3, 0.4, 0.5))
    b = from_log_coords(LogCoords(0.3, 0.4, 0.5 + ETA_PERIOD))
    c = from_log_coords(LogCoords(0.3, 0.4, 0.5 + 2 * np.pi))
    assert abs(a.z - b.z) < 1e-14
    assert abs(a.z + c.z) < 1e-14  # 2 pi is a half period


def test_origin_has_no_log_coords():
    with pytest.raises(OriginNotRepresentable):
        to_log_coords(pt(0, 0, 0))


def test_cylindrical(rng):
    c = to_cylindrical(pt(1, 1, 2))
    assert c.r == pytest.approx(np.sqrt(2)) and c.theta == pytest.approx(np.pi / 4) and c.t == 2
    c = to_cylindrical(pt(0, 0, 5))
    assert (c.r, c.theta, c.t) == (0, 0, 5)
    p = HPoint.from_xyt(*rng.normal(size=(3, 200)))
    q = from_cylindrical(to_cylindrical(p))
    assert np.max(np.abs(q.z - p.z)) < 1e-12 and np.max(np.abs(q.t - p.t)) == 0
    assert isinstance(c, CylCoords)
