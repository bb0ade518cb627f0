"""Quadratic differentials, forms of degree k and their operators.

A quadratic differential is stored by its coefficient ``q`` in ``[q dz^2]``;
a form of degree k by ``alpha`` in ``[alpha dz^k]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields as F
from . import jets as J
from .errors import BranchCutCrossed, NotContact, OperatorsNonzero, UnknownIdentifier, ZeroAtBase
from .fields import ScalarField, frame_derivatives
from .heisenberg import HPoint, group_mul
from .jets import Jet2
from .qc import ContactMap, contact_defect_norm
from .quadrature import gl_nodes

BRANCH_FLOOR = 1e-9


@dataclass(frozen=True)
class QuadDiff:
    coeff: ScalarField
    name: str = "q"

    @property
    def domain(self):
        return self.coeff.domain

    def __call__(self, p: HPoint):
        return self.coeff(p)

    def on_vector(self, p: HPoint, zdot):
        """``q(gamma') = q(p) zdot^2`` for a Legendrian velocity with horizontal part ``zdot``."""
        return self.coeff(p) * np.asarray(zdot) ** 2


@dataclass(frozen=True)
class KForm:
    k: int
    coeff: ScalarField
    name: str = "alpha"

    def __post_init__(self):
        if int(self.k) < 2:
            raise ValueError("forms of degree k need k >= 2")


def _frame_field(f: ScalarField, formula, name):
    """Field ``formula(value, frame_derivatives)`` built from the jets of ``f``."""

    def fn(x, y, t):
        inner = f.fn(*J.seed(x, y, t))
        if not isinstance(inner, Jet2):
            return 0
        return formula(inner.value, frame_derivatives(inner, x + 1j * y))

    return ScalarField(fn, name, f.domain)


# -- operators ----------------------------------------------------------------------
def D2prime(q: QuadDiff) -> ScalarField:
    """``2q ZZbar q - Zq Zbar q - 4i q Tq`` (frame [dz^3] (x) w^dz)."""
    return _frame_field(q.coeff, lambda v, d: 2 * v * d.ZZbar() - d.Z() * d.Zbar() - 4j * v * d.T(),
                        f"D2'({q.name})")


def D2second(q: QuadDiff) -> ScalarField:
    """``2q Zbar^2 q - (Zbar q)^2`` (frame [dz^3] (x) w^dzbar)."""
    return _frame_field(q.coeff, lambda v, d: 2 * v * d.Zbar2() - d.Zbar() * d.Zbar(), f"D2''({q.name})")


def _B(v, d):
    # Zbar(|q|^2) + conj(q) Zbar q = 2 conj(q) Zbar q + q conj(Z q)
    return 2 * J.conj(v) * d.Zbar() + v * J.conj(d.Z())


def B2(q: QuadDiff) -> ScalarField:
    return _frame_field(q.coeff, _B, f"B2({q.name})")


def Dkprime(a: KForm) -> ScalarField:
    k = int(a.k)
    return _frame_field(a.coeff, lambda v, d: k * v * d.ZZbar() + (1 - k) * d.Z() * d.Zbar() - 2j * k * v * d.T(),
                        f"D{k}'({a.name})")


def Dksecond(a: KForm) -> ScalarField:
    k = int(a.k)
    return _frame_field(a.coeff, lambda v, d: k * v * d.Zbar2() + (1 - k) * d.Zbar() * d.Zbar(), f"D{k}''({a.name})")


def Bk(a: KForm) -> ScalarField:
    return _frame_field(a.coeff, _B, f"B{int(a.k)}({a.name})")


def operator_report(q: QuadDiff, points: HPoint) -> dict:
    """Largest modulus of each operator over ``points``."""
    return {
        "B2_max": float(np.max(np.abs(B2(q)(points)))),
        "D2prime_max": float(np.max(np.abs(D2prime(q)(points)))),
        "D2second_max": float(np.max(np.abs(D2second(q)(points)))),
    }


# -- pull-backs and naturality ---------------------------------------------------------
def _check_contact(g: ContactMap, points, tol):
    if points is None:
        return
    d = contact_defect_norm(g, points)
    if np.max(d) > tol:
        raise NotContact(f"{g.name}: contact defect {np.max(d):.3e} exceeds {tol:g}")


def pullback(q: QuadDiff, g: ContactMap, check_points: HPoint | None = None, tol=1e-8) -> QuadDiff:
    """``g*q`` with coefficient ``(q o g) (Z g1)^2``."""
    _check_contact(g, check_points, tol)
    Zg1 = F.Z(g.f1)

    def fn(x, y, t):
        zg = Zg1.fn(x, y, t)
        return q.coeff.fn(*g.fns(x, y, t)) * zg * zg

    name = f"{g.name}*{q.name}"
    return QuadDiff(ScalarField(fn, name, g.domain), name)


# transported frame factors, as functions of Z g1
TRANSPORT = {
    "D2second": lambda w: w**3 * np.conj(w) * np.abs(w) ** 2,
    "D2prime": lambda w: w**4 * np.abs(w) ** 2,
    "B2": lambda w: np.conj(w) * np.abs(w) ** 4,
}
_OPS = {"D2second": D2second, "D2prime": D2prime, "B2": B2}


def naturality_defect(q: QuadDiff, g: ContactMap, points: HPoint, operator="D2second", tol=1e-8) -> float:
    """``max |Op(g*q) - (Op(q) o g) factor(Z g1)|`` over ``points``."""
    _check_contact(g, points, tol)
    op = _OPS[operator]
    lhs = op(pullback(q, g))(points)
    w = F.eval_Z(g.f1, points)
    rhs = op(q)(g(points)) * TRANSPORT[operator](w)
    return float(np.max(np.abs(lhs - rhs)))


# -- natural charts --------------------------------------------------------------------
def _jsum(u, axis):
    if isinstance(u, Jet2):
        return Jet2(_jsum(u.value, axis), tuple(g if J._is_zero(g) else _jsum(g, axis) for g in u.grad),
                    tuple(h if J._is_zero(h) else _jsum(h, axis) for h in u.hess))
    return np.sum(u, axis=axis)


PATHS = {
    "straight": lambda b, p: [b, p],
    "t_first": lambda b, p: [b, (b[0], b[1], p[2]), p],
    "z_first": lambda b, p: [b, (p[0], p[1], b[2]), p],
}


class NaturalChart:
    """Path-integrated chart ``(f, h)`` in which ``q`` becomes ``[dw^2]``.

    ``f`` integrates ``sqrt(q) dz + (1/2i) Zbar(sqrt q) w`` and ``h`` the real
    form ``i conj(f) u dz - i f conj(u) dzbar + (|u|^2 + i conj(f) Tf - i f conj(Tf)) w``
    with ``u = sqrt(q)``, both from ``base``.  The square root is continued
    along each path starting from ``sign * sqrt(q(base))``.  Evaluation works
    on arrays and on jets, so the chart can be differentiated exactly.
    """

    def __init__(self, q: QuadDiff, base: HPoint, path="straight", sign=1, n_seg=2, n_nodes=16,
                 track=64, branch_floor=BRANCH_FLOOR):
        self.q = q
        self.base = (float(np.real(base.z)), float(np.imag(base.z)), float(base.t))
        self.path = PATHS[path] if isinstance(path, str) else path
        self.sign = sign
        self.n_seg = n_seg
        self.n_nodes = n_nodes
        self.track = track
        self.branch_floor = branch_floor
        self.f = ScalarField(lambda x, y, t: self._values(x, y, t)[0], f"f[{q.name}]", q.domain)
        self.h = ScalarField(lambda x, y, t: J.real(self._values(x, y, t)[1]), f"h[{q.name}]", q.domain)

    def as_map(self) -> ContactMap:
        return ContactMap(self.f, self.h, f"chart[{self.q.name}]", self.q.domain)

    # parameter along the polyline: edge e covers [e, e + 1]
    def _point(self, verts, s):
        e = np.minimum(np.floor(s).astype(int), len(verts) - 2)
        local = s - e
        out = []
        for c in range(3):
            comp = 0
            for k in range(len(verts) - 1):
                sel = (e == k).astype(float)
                if not np.any(sel):
                    continue
                p0, p1 = verts[k][c], verts[k + 1][c]
                comp = comp + sel * (p0 + local * (p1 - p0))
            out.append(comp)
        return out

    def _velocity(self, verts, s):
        e = np.minimum(np.floor(s).astype(int), len(verts) - 2)
        out = []
        for c in range(3):
            comp = 0
            for k in range(len(verts) - 1):
                sel = (e == k).astype(float)
                if not np.any(sel):
                    continue
                comp = comp + sel * (verts[k + 1][c] - verts[k][c])
            out.append(comp)
        return out

    def _tracked_root(self, verts, n_edges, nd):
        """Continuous branch of sqrt(q) sampled along the path (plain values)."""
        s = np.linspace(0.0, n_edges, self.track * n_edges + 1).reshape((-1,) + (1,) * nd)
        bverts = [tuple(J.base_value(c) for c in v) for v in verts]
        x, y, t = np.broadcast_arrays(*self._point(bverts, s))
        qv = self.q.coeff(HPoint.from_xyt(x, y, t))
        if np.any(np.abs(qv) < self.branch_floor):
            raise BranchCutCrossed("q vanishes along the integration path")
        u = np.sqrt(qv)
        u[0] *= self.sign
        for i in range(1, u.shape[0]):
            flip = np.abs(u[i] - u[i - 1]) > np.abs(u[i] + u[i - 1])
            u[i] = np.where(flip, -u[i], u[i])
            if np.any(np.abs(u[i] - u[i - 1]) > 0.5 * np.abs(u[i])):
                raise BranchCutCrossed("sqrt(q) cannot be continued along the path at this resolution")
        return u

    def _integrands(self, verts, s, track_u, f_at=None):
        """gamma and (optionally) beta contracted with the path velocity at parameters ``s``."""
        x, y, t = self._point(verts, s)
        vx, vy, vt = self._velocity(verts, s)
        inner = self.q.coeff.fn(*J.seed(x, y, t))
        if not isinstance(inner, Jet2):
            inner = Jet2(inner)
        d = frame_derivatives(inner, x + 1j * y)
        principal = J.sqrt(inner.value)
        pv = J.base_value(principal)
        shape = np.broadcast_shapes(np.shape(pv), np.shape(s), track_u.shape[1:])
        idx = np.broadcast_to(np.rint(s * self.track).astype(int), shape)
        ref = np.take_along_axis(np.broadcast_to(track_u, track_u.shape[:1] + shape[1:]), idx, axis=0)
        u = principal * np.where(np.abs(pv - ref) <= np.abs(pv + ref), 1.0, -1.0)
        zb = d.Zbar()
        # T f = Zbar(u) / 2i with Zbar u = Zbar q / 2u
        Tf = 0 if J._is_zero(zb) else (zb / (2.0 * u)) / 2j
        w = vt + 2.0 * (x * vy - y * vx)
        dz = vx + 1j * vy
        gamma = u * dz + Tf * w
        if f_at is None:
            return gamma, None
        fb = J.conj(f_at)
        c = u * J.conj(u) + 1j * fb * Tf - 1j * f_at * J.conj(Tf)
        beta = 1j * fb * u * dz - 1j * f_at * J.conj(u) * J.conj(dz) + c * w
        return gamma, beta

    def _values(self, x, y, t):
        verts = self.path(self.base, (x, y, t))
        n_edges = len(verts) - 1
        S = np.broadcast_shapes(*(np.shape(J.base_value(c)) for c in (x, y, t)))
        nd = len(S)
        pad = (1,) * nd
        track_u = self._tracked_root(verts, n_edges, nd)
        xg, wg = gl_nodes(self.n_nodes)
        K = self.n_nodes
        f_acc, h_acc = 0, 0
        for e in range(n_edges):
            for k in range(self.n_seg):
                a = e + k / self.n_seg
                b = e + (k + 1) / self.n_seg
                sk = a + (b - a) * (xg + 1.0) / 2.0
                wk = ((b - a) / 2.0 * wg).reshape((K,) + pad)
                # prefix integrals from a to every node, on a K x K block of sub-nodes
                sub = a + (sk[:, None] - a) * (xg[None, :] + 1.0) / 2.0
                wsub = ((sk[:, None] - a) / 2.0 * wg[None, :]).reshape((K, K) + pad)
                g_sub, _ = self._integrands(verts, sub.reshape((K * K,) + pad), track_u)
                g_sub = _reshape(g_sub, K, nd)
                f_nodes = f_acc + _jsum(g_sub * wsub, axis=1)
                gam, beta = self._integrands(verts, sk.reshape((K,) + pad), track_u, f_at=f_nodes)
                f_acc = f_acc + _jsum(gam * wk, axis=0)
                h_acc = h_acc + _jsum(beta * wk, axis=0)
        return f_acc, h_acc


def _reshape(u, K, nd):
    """Split a leading axis of length K*K (or 1) into two axes."""
    if isinstance(u, Jet2):
        return Jet2(_reshape(u.value, K, nd), tuple(g if J._is_zero(g) else _reshape(g, K, nd) for g in u.grad),
                    tuple(h if J._is_zero(h) else _reshape(h, K, nd) for h in u.hess))
    a = np.asarray(u)
    if a.ndim == 0:
        return u
    a = a.reshape((1,) * (nd + 1 - a.ndim) + a.shape)
    lead = (K, K) if a.shape[0] == K * K else (1, 1)
    return a.reshape(lead + a.shape[1:])


def natural_chart(q: QuadDiff, base: HPoint, path="straight", sign=1, radius=0.25, tol=1e-8,
                  n_check=200, rng=None, **kw):
    """Natural chart ``(f, h)`` of ``q`` around ``base`` with ``f(base) = h(base) = 0``.

    Raises :class:`ZeroAtBase` when ``q(base) = 0`` and :class:`OperatorsNonzero`
    when D2', D2'' or B2 fail to vanish near ``base``.
    """
    q0 = complex(np.ravel(q(base))[0])
    if abs(q0) < kw.get("branch_floor", BRANCH_FLOOR):
        raise ZeroAtBase(f"{q.name} vanishes at the base point")
    rng = np.random.default_rng(0) if rng is None else rng
    off = HPoint.from_xyt(*rng.uniform(-radius, radius, size=(3, n_check)))
    near = group_mul(HPoint(np.full(n_check, complex(base.z)), np.full(n_check, float(base.t))), off)
    near = near.take(np.flatnonzero(np.ravel(q.domain.contains(near))))
    if near.size:
        scale = 1.0 + float(np.max(np.abs(q(near)))) ** 2
        worst = {name: float(np.max(np.abs(op(q)(near)))) for name, op in _OPS.items()}
        bad = {k: v for k, v in worst.items() if v > tol * scale}
        if bad:
            raise OperatorsNonzero(f"{q.name}: operators do not vanish near base: {bad}")
    chart = NaturalChart(q, base, path=path, sign=sign, **kw)
    return chart.f, chart.h


# -- catalog quadratic differentials --------------------------------------------------------
def qd_dz2():
    return QuadDiff(ScalarField(lambda x, y, t: 1.0 + 0j, "1"), "dz2")


def qd_pi_dw2():
    return QuadDiff(ScalarField(lambda x, y, t: -4.0 * (x - 1j * y) ** 2, "-4 zbar^2"), "pi_dw2")


def qd_pi_dw2_over_w2():
    def fn(x, y, t):
        w = t + 1j * (x * x + y * y)
        return -4.0 * (x - 1j * y) ** 2 / (w * w)

    return QuadDiff(ScalarField(fn, "-4 zbar^2 / Pi^2"), "pi_dw2_over_w2")


QUADRATIC_DIFFERENTIALS = {"dz2": qd_dz2, "pi_dw2": qd_pi_dw2, "pi_dw2_over_w2": qd_pi_dw2_over_w2}


def load_qd(name: str) -> QuadDiff:
    try:
        return QUADRATIC_DIFFERENTIALS[name]()
    except KeyError:
        raise UnknownIdentifier(name) from None
