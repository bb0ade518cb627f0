"""Legendrian curves, trajectory tracing and q-lengths."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import jets as J
from .errors import HitZero, ImageNotTrajectory, LeftDomain
from .heisenberg import HPoint
from .quadrature import gl_nodes

CLASSIFY_TOL = 1e-6
CSV_COLUMNS = ("s", "re_z", "im_z", "t", "re_zdot", "im_zdot", "legendrian_defect")


def legendre_tdot(z, zdot):
    """Vertical velocity forced by the Legendrian condition."""
    return -2.0 * np.imag(np.conj(z) * zdot)


def closed_form_jets(fn, s):
    """Values and first/second s-derivatives of ``fn(s) -> (z, t)``."""
    z, t = fn(J.seed1(np.asarray(s, dtype=float)))

    def parts(u):
        if isinstance(u, J.Jet2):
            d1 = 0 if J._is_zero(u.grad[0]) else u.grad[0]
            d2 = 0 if J._is_zero(u.hess[0]) else u.hess[0]
            return u.value, d1, d2
        return u, 0, 0

    shape = np.shape(s)
    zv, zd, zdd = (np.broadcast_to(np.asarray(v, dtype=complex), shape) for v in parts(z))
    tv, td, tdd = (np.broadcast_to(np.real(np.asarray(v, dtype=complex)), shape) for v in parts(t))
    return zv, zd, zdd, tv, td, tdd


class LegendrianCurve:
    """Samples ``(s, z, t, zdot)`` of a curve tangent to the contact distribution.

    ``fn`` optionally carries a closed form ``s -> (z, t)`` written with
    :mod:`hckit.jets`, which quadrature then evaluates exactly.
    """

    def __init__(self, s, z, t, zdot, tdot=None, name="curve", fn=None):
        self.s = np.asarray(s, dtype=float)
        self.z = np.asarray(z, dtype=complex)
        self.t = np.asarray(t, dtype=float)
        self.zdot = np.asarray(zdot, dtype=complex)
        self.tdot = None if tdot is None else np.asarray(tdot, dtype=float)
        self.name = name
        self.fn = fn

    def __len__(self):
        return self.s.size

    @property
    def points(self) -> HPoint:
        return HPoint(self.z, self.t)

    def reversed(self) -> "LegendrianCurve":
        s = self.s[-1] + self.s[0] - self.s[::-1]
        fn = None
        if self.fn is not None:
            s0, s1, g = self.s[0], self.s[-1], self.fn
            fn = lambda u: g(s0 + s1 - u)  # noqa: E731
        tdot = None if self.tdot is None else -self.tdot[::-1]
        return LegendrianCurve(s, self.z[::-1], self.t[::-1], -self.zdot[::-1], tdot, self.name + "~", fn)

    def evaluate(self, s):
        """``(z, t, zdot)`` at arbitrary parameters, exact or cubic-Hermite."""
        s = np.asarray(s, dtype=float)
        if self.fn is not None:
            z, zd, _, t, _, _ = closed_form_jets(self.fn, s)
            return z, t, zd
        if len(self) < 2:
            return (np.full(s.shape, self.z[0]) if len(self) else np.zeros(s.shape, complex),
                    np.full(s.shape, self.t[0] if len(self) else 0.0), np.zeros(s.shape, complex))
        i = np.clip(np.searchsorted(self.s, s, side="right") - 1, 0, len(self) - 2)
        h = self.s[i + 1] - self.s[i]
        u = (s - self.s[i]) / h
        tdot = legendre_tdot(self.z, self.zdot) if self.tdot is None else self.tdot
        z, zd = _hermite(u, h, self.z[i], self.z[i + 1], self.zdot[i], self.zdot[i + 1])
        t, _ = _hermite(u, h, self.t[i], self.t[i + 1], tdot[i], tdot[i + 1])
        return z, np.real(t), zd

    def defect(self):
        """Legendrian defect at every sample.

        With a stored vertical velocity this is ``|tdot + 2 Im(conj(z) zdot)|``.
        Otherwise each interval compares the change of ``t`` with the integral
        of ``-2 Im(conj(z) zdot)`` over the Hermite interpolant of ``z``, and a
        sample reports the larger mismatch of its two intervals.
        """
        if self.tdot is not None:
            return np.abs(self.tdot - legendre_tdot(self.z, self.zdot))
        n = len(self)
        if n < 2:
            return np.zeros(n)
        x, w = gl_nodes(4)
        u = (x[:, None] + 1.0) / 2.0
        h = np.diff(self.s)
        z, zd = _hermite(u, h, self.z[:-1], self.z[1:], self.zdot[:-1], self.zdot[1:])
        dt = np.sum(0.5 * w[:, None] * h * legendre_tdot(z, zd), axis=0)
        mism = np.abs(np.diff(self.t) - dt)
        out = np.zeros(n)
        out[:-1] = mism
        out[1:] = np.maximum(out[1:], mism)
        return out

    def to_csv(self, target=None):
        """Write the curve-export CSV; returns the text when ``target`` is None."""
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(CSV_COLUMNS)
        d = self.defect()
        for k in range(len(self)):
            wr.writerow([repr(float(v)) for v in (self.s[k], self.z[k].real, self.z[k].imag, self.t[k],
                                                  self.zdot[k].real, self.zdot[k].imag, d[k])])
        text = buf.getvalue()
        if target is None:
            return text
        with open(target, "w", newline="") as fh:
            fh.write(text)
        return text


def _hermite(u, h, p0, p1, m0, m1):
    """Cubic Hermite value and derivative (w.r.t. the parameter) on one interval."""
    h00 = 2 * u**3 - 3 * u**2 + 1
    h10 = u**3 - 2 * u**2 + u
    h01 = -2 * u**3 + 3 * u**2
    h11 = u**3 - u**2
    val = h00 * p0 + h10 * h * m0 + h01 * p1 + h11 * h * m1
    d00 = 6 * u**2 - 6 * u
    d10 = 3 * u**2 - 4 * u + 1
    d01 = -6 * u**2 + 6 * u
    d11 = 3 * u**2 - 2 * u
    der = (d00 * p0 + d01 * p1) / h + d10 * m0 + d11 * m1
    return val, der


# -- constructors ------------------------------------------------------------------------
def curve_from_closed_form(fn, s, name="closed form") -> LegendrianCurve:
    """Sample ``fn(s) -> (z, t)``; derivatives come from jets."""
    z, zd, _, t, td, _ = closed_form_jets(fn, s)
    return LegendrianCurve(s, z, t, zd, td, name, fn)


def legendrian_lift(z_fn, t0, s, s0=None, name="lift", n_nodes=16) -> LegendrianCurve:
    """Lift a planar curve: ``t(s) = t0 - int_{s0}^s 2 Im(conj(z) zdot)``."""
    s = np.asarray(s, dtype=float)
    s0 = s[0] if s0 is None and s.size else (0.0 if s0 is None else s0)

    def pieces(a, b):
        x, w = gl_nodes(n_nodes)
        nodes = a[..., None] + (b - a)[..., None] * (x + 1.0) / 2.0
        zj = z_fn(J.seed1(nodes))
        zv = J.base_value(zj)
        zd = zj.grad[0] if isinstance(zj, J.Jet2) and not J._is_zero(zj.grad[0]) else 0.0
        return np.sum((b - a)[..., None] / 2.0 * w * legendre_tdot(zv, zd), axis=-1)

    t = t0 + pieces(np.full(s.shape, float(s0)), s)

    def fn(u):
        # closed form on the planar part; t by the same quadrature when evaluated on arrays
        zj = z_fn(u)
        if isinstance(u, J.Jet2):
            sv = J.base_value(u)
            tv = t0 + pieces(np.full(np.shape(sv), float(s0)), sv)
            zd = zj.grad[0] if isinstance(zj, J.Jet2) else 0
            zdd = zj.hess[0] if isinstance(zj, J.Jet2) else 0
            zv = J.base_value(zj)
            td = legendre_tdot(zv, zd)
            tdd = -2.0 * np.imag(np.conj(zd) * zd + np.conj(zv) * zdd)
            return zj, J.Jet2(tv, (td, 0, 0), (tdd, 0, 0, 0, 0, 0))
        return zj, t0 + pieces(np.full(np.shape(u), float(s0)), np.asarray(u, dtype=float))

    zj = z_fn(J.seed1(s))
    z = np.broadcast_to(J.base_value(zj), s.shape).astype(complex)
    zd = np.broadcast_to(zj.grad[0] if isinstance(zj, J.Jet2) and not J._is_zero(zj.grad[0]) else 0.0,
                         s.shape).astype(complex)
    return LegendrianCurve(s, z, t, zd, legendre_tdot(z, zd), name, fn)


# -- trajectories ------------------------------------------------------------------------
def q_on_curve(q, c: LegendrianCurve):
    """``q(gamma'(s)) = q(gamma(s)) zdot(s)^2`` at the samples."""
    return q(c.points) * c.zdot**2


def classify(q, c: LegendrianCurve, tol=CLASSIFY_TOL) -> str:
    """``"horizontal"``, ``"vertical"`` or ``"neither"``."""
    v = q_on_curve(q, c)
    re, im = v.real, v.imag
    flat = np.abs(im) <= tol * np.maximum(1.0, np.abs(re))
    if v.size and np.all(flat) and np.all(re > 0):
        return "horizontal"
    if v.size and np.all(flat) and np.all(re < 0):
        return "vertical"
    return "neither"


def _direction(qv, mode, ref):
    """Unit zdot with ``q zdot^2`` positive (horizontal) or negative (vertical), nearest ``ref``."""
    r = np.sqrt(np.conj(qv) / np.abs(qv))
    if mode == "vertical":
        r = 1j * r
    return np.where(np.abs(r - ref) <= np.abs(r + ref), r, -r)


def trace(q, start: HPoint, mode="horizontal", orientation=1, step=1e-3, n_steps=1000, domain=None,
          hint=None, floor=1e-9, name=None) -> LegendrianCurve:
    """Integrate the unit-speed trajectory field of ``q`` with classical RK4.

    The direction at each stage is the root closest to the direction at the
    start of the step, so the square root of ``q`` never flips branch.
    """
    if mode not in ("horizontal", "vertical"):
        raise ValueError("mode must be 'horizontal' or 'vertical'")
    domain = q.domain if domain is None else domain
    z = complex(np.ravel(start.z)[0])
    t = float(np.ravel(start.t)[0])

    def qval(z, t):
        return complex(q(HPoint(z, t)))

    def field(z, t, ref, k):
        qv = qval(z, t)
        if abs(qv) < floor:
            raise HitZero(f"|q| < {floor:g} at step {k}", partial=_partial())
        d = complex(_direction(qv, mode, ref))
        return d, float(legendre_tdot(z, d))

    ss, zs, ts, ds = [], [], [], []

    def _partial():
        return LegendrianCurve(np.array(ss), np.array(zs), np.array(ts), np.array(ds), None, name or "partial")

    q0 = qval(z, t)
    if abs(q0) < floor:
        raise HitZero("|q| vanishes at the start point", partial=None)
    if hint is None:
        r = np.sqrt(np.conj(q0) / abs(q0))
        ref = complex((1j * r if mode == "vertical" else r) * orientation)
    else:
        ref = complex(hint) * orientation
    d, _ = field(z, t, ref, 0)
    ss.append(0.0), zs.append(z), ts.append(t), ds.append(d)
    for k in range(1, n_steps + 1):
        ref = ds[-1]
        k1z, k1t = field(z, t, ref, k)
        k2z, k2t = field(z + 0.5 * step * k1z, t + 0.5 * step * k1t, ref, k)
        k3z, k3t = field(z + 0.5 * step * k2z, t + 0.5 * step * k2t, ref, k)
        k4z, k4t = field(z + step * k3z, t + step * k3t, ref, k)
        zn = z + step / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z)
        tn = t + step / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t)
        if not bool(np.all(domain.contains(HPoint(zn, tn)))):
            raise LeftDomain(f"trajectory left {domain.name} at step {k}", partial=_partial())
        z, t = zn, tn
        d, _ = field(z, t, ref, k)
        ss.append(k * step), zs.append(z), ts.append(t), ds.append(d)
    return LegendrianCurve(np.array(ss), np.array(zs), np.array(ts), np.array(ds), None,
                           name or f"{mode} trajectory of {getattr(q, 'name', 'q')}")


def q_length(q, c: LegendrianCurve, n_nodes=8) -> float:
    """``int sqrt|q(gamma)| |zdot| ds`` by Gauss-Legendre on every sample interval."""
    if len(c) < 2:
        return 0.0
    x, w = gl_nodes(n_nodes)
    a, b = c.s[:-1], c.s[1:]
    nodes = a[:, None] + (b - a)[:, None] * (x + 1.0) / 2.0
    z, t, zd = c.evaluate(nodes)
    integrand = np.sqrt(np.abs(q(HPoint(z, t)))) * np.abs(zd)
    return float(np.sum((b - a)[:, None] / 2.0 * w * integrand))


def map_curve(f, c: LegendrianCurve, name=None) -> LegendrianCurve:
    """Image of ``c`` under a contact map, with velocities by the chain rule."""
    name = name or f"{f.name}({c.name})"
    if c.fn is not None:
        g = c.fn

        def fn(u):
            z, t = g(u)
            x1, y1, t1 = f.fns(J.real(z), J.imag(z), J.real(t))
            return x1 + 1j * y1, t1

        return curve_from_closed_form(fn, c.s, name)
    p = c.points
    tdot = legendre_tdot(c.z, c.zdot) if c.tdot is None else c.tdot
    vel = (c.zdot.real, c.zdot.imag, tdot)
    j1, j2 = f.f1.jet(p), f.f2.jet(p)

    def push(jet):
        return sum(0 if J._is_zero(g) else g * v for g, v in zip(jet.grad, vel))

    zd = np.broadcast_to(push(j1), c.s.shape).astype(complex)
    td = np.real(np.broadcast_to(push(j2), c.s.shape))
    return LegendrianCurve(c.s, f.f1(p), np.real(f.f2(p)), zd, td, name)


@dataclass(frozen=True)
class Dilation:
    factor: float
    source_mode: str
    image_mode: str


def dilation_factor(f, q_src, q_dst, c: LegendrianCurve) -> Dilation:
    """Ratio of q-lengths ``l_{q_dst}(f(c)) / l_{q_src}(c)``.

    Raises :class:`ImageNotTrajectory` unless ``c`` is a trajectory of
    ``q_src`` whose image is a trajectory of the same kind for ``q_dst``.
    """
    mode = classify(q_src, c)
    image = map_curve(f, c)
    image_mode = classify(q_dst, image)
    if mode == "neither" or image_mode != mode:
        raise ImageNotTrajectory(f"{c.name}: {mode} trajectory maps to a {image_mode} curve")
    return Dilation(q_length(q_dst, image) / q_length(q_src, c), mode, image_mode)


def align(c: LegendrianCurve, member, lo, hi, n_track=4096, iters=8):
    """Parameters ``sigma_i`` with ``member(sigma_i)`` closest to the samples of ``c``.

    The first guess matches horizontal arclength from the start of both
    curves; Newton steps on the squared coordinate distance polish it.
    Returns ``(sigma, sup_distance)``.
    """
    grid = np.linspace(lo, hi, n_track)
    _, zd, _, _, _, _ = closed_form_jets(member, grid)
    speed = np.abs(zd)
    arc = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(grid))])
    s_arc = np.concatenate([[0.0], np.cumsum(np.abs(c.zdot[1:] + c.zdot[:-1]) * 0.5 * np.diff(c.s))])
    sigma = np.interp(s_arc, arc, grid)
    for _ in range(iters):
        z, zd, zdd, t, td, tdd = closed_form_jets(member, sigma)
        ez, et = z - c.z, t - c.t
        g = np.real(np.conj(ez) * zd) + et * td
        h = np.abs(zd) ** 2 + np.real(np.conj(ez) * zdd) + td**2 + et * tdd
        sigma = sigma - g / np.where(np.abs(h) > 1e-300, h, 1.0)
    z, _, _, t, _, _ = closed_form_jets(member, sigma)
    dist = np.maximum(np.abs(z - c.z), np.abs(t - c.t))
    return sigma, float(np.max(dist, initial=0.0))
