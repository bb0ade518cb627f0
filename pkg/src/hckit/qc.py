"""Contact maps, the Beltrami system and distortion."""
from __future__ import annotations

import numpy as np

from . import jets as J
from .errors import DegenerateDerivative
from .fields import WHOLE_GROUP, ScalarField, _as_array, frame_derivatives
from .heisenberg import HPoint
from .parallel import ordered_map

DEGENERATE_FLOOR = 1e-12
CHUNK = 32768


class ContactMap:
    """A map ``(z, t) -> (f1, f2)`` given by two fields; ``f2`` is real."""

    def __init__(self, f1: ScalarField, f2: ScalarField, name="f", domain=None, inverse=None):
        self.f1 = f1
        self.f2 = f2
        self.name = name
        self.domain = domain if domain is not None else WHOLE_GROUP
        self.inverse = inverse

    def __repr__(self):
        return f"ContactMap({self.name!r})"

    def fns(self, x, y, t):
        """Image coordinates ``(x', y', t')`` in any jet algebra."""
        w = self.f1.fn(x, y, t)
        return J.real(w), J.imag(w), J.real(self.f2.fn(x, y, t))

    def __call__(self, p: HPoint) -> HPoint:
        return HPoint(self.f1(p), np.real(self.f2(p)))

    def compose(self, inner: "ContactMap", name=None) -> "ContactMap":
        """``self o inner``."""
        outer = self

        def f1(x, y, t):
            return outer.f1.fn(*inner.fns(x, y, t))

        def f2(x, y, t):
            return outer.f2.fn(*inner.fns(x, y, t))

        inv = None
        if self.inverse is not None and inner.inverse is not None:
            inv = inner.inverse.compose(self.inverse)
        name = name or f"{self.name}∘{inner.name}"
        return ContactMap(ScalarField(f1, name + ".1"), ScalarField(f2, name + ".2"), name, inner.domain, inv)


def pull_field(field: ScalarField, g: ContactMap) -> ScalarField:
    """``field o g``."""
    return ScalarField(lambda x, y, t: field.fn(*g.fns(x, y, t)), f"{field.name}∘{g.name}", g.domain)


# -- standard maps ---------------------------------------------------------------------
def _map(f1, f2, name, inverse=None):
    return ContactMap(ScalarField(f1, name + ".1"), ScalarField(f2, name + ".2"), name, None, inverse)


def identity_map():
    return _map(lambda x, y, t: x + 1j * y, lambda x, y, t: t, "id")


def left_translation(z0, t0, _with_inverse=True):
    z0 = complex(z0)
    t0 = float(t0)

    def f2(x, y, t):
        # t0 + t + 2 Im(z0 zbar)
        return t0 + t + 2.0 * (z0.imag * x - z0.real * y)

    inv = left_translation(-z0, -t0, False) if _with_inverse else None
    return _map(lambda x, y, t: z0 + x + 1j * y, f2, f"L({z0},{t0})", inv)


def rotation(theta, _with_inverse=True):
    e = np.exp(1j * theta)
    inv = rotation(-theta, False) if _with_inverse else None
    return _map(lambda x, y, t: e * (x + 1j * y), lambda x, y, t: t, f"R({theta})", inv)


def dilation(r, _with_inverse=True):
    inv = dilation(1.0 / r, False) if _with_inverse else None
    return _map(lambda x, y, t: r * (x + 1j * y), lambda x, y, t: r * r * t, f"δ({r})", inv)


def inversion():
    """The CR inversion ``(z, t) -> (z / Pi, -t / |Pi|^2)`` with ``Pi = t + i|z|^2``.

    Its square is the rotation by pi, since ``Pi o inversion = -1/Pi``.
    """

    def f1(x, y, t):
        return (x + 1j * y) / (t + 1j * (x * x + y * y))

    def f2(x, y, t):
        r2 = x * x + y * y
        return -t / (t * t + r2 * r2)

    m = _map(f1, f2, "inversion")
    m.inverse = rotation(np.pi, False).compose(m, "inversion^-1")
    return m


# -- pointwise analysis -------------------------------------------------------------------
class _MapJets:
    def __init__(self, f: ContactMap, p: HPoint):
        self.p = p
        j1 = f.f1.jet(p)
        j2 = f.f2.jet(p)
        self.v1 = _as_array(j1.value, p.shape)
        self.v2 = _as_array(j2.value, p.shape)
        fd1 = frame_derivatives(j1, p.z)
        fd2 = frame_derivatives(j2, p.z)
        s = p.shape
        self.Zf1 = _as_array(fd1.Z(), s)
        self.Zbf1 = _as_array(fd1.Zbar(), s)
        self.Tf1 = _as_array(fd1.T(), s)
        self.Zf2 = _as_array(fd2.Z(), s)
        self.Zbf2 = _as_array(fd2.Zbar(), s)
        self.Tf2 = _as_array(fd2.T(), s)


def _pullback_omega(m: _MapJets):
    """(f*w)(Z), (f*w)(Zbar), (f*w)(T)."""
    f1, f1b = m.v1, np.conj(m.v1)

    def on(df1, dbf1, df2):
        # d(conj f1)(X) = conj(conj(X) f1)
        return df2 - 1j * f1b * df1 + 1j * f1 * dbf1

    a = on(m.Zf1, np.conj(m.Zbf1), m.Zf2)
    b = on(m.Zbf1, np.conj(m.Zf1), m.Zbf2)
    lam = on(m.Tf1, np.conj(m.Tf1), m.Tf2)
    return a, b, lam


def contact_defect(f: ContactMap, p: HPoint):
    """``((f*w)(Z), (f*w)(Zbar), lambda)``; contact means the first two vanish."""
    a, b, lam = _pullback_omega(_MapJets(f, p))
    return a, b, lam


def contact_defect_norm(f: ContactMap, p: HPoint):
    a, b, _ = contact_defect(f, p)
    return np.maximum(np.abs(a), np.abs(b))


def _degenerate(m: _MapJets, mask, why):
    where = m.p.take(np.flatnonzero(np.ravel(mask))[:10])
    raise DegenerateDerivative(why, where=where)


def beltrami(f: ContactMap, p: HPoint, floor=DEGENERATE_FLOOR):
    """Beltrami coefficient ``Zbar f1 / Z f1``."""
    m = _MapJets(f, p)
    small = np.abs(m.Zf1) < floor
    if np.any(small):
        _degenerate(m, small, "|Z f1| below floor")
    return m.Zbf1 / m.Zf1


def beltrami_system(f: ContactMap, p: HPoint, floor=DEGENERATE_FLOOR):
    """``(mu, defect)`` where defect is ``Zbar F - mu Z F`` for ``F = f2 + i|f1|^2``."""
    m = _MapJets(f, p)
    small = np.abs(m.Zf1) < floor
    if np.any(small):
        _degenerate(m, small, "|Z f1| below floor")
    mu = m.Zbf1 / m.Zf1
    f1b = np.conj(m.v1)
    # Z|f1|^2 = f1b Z f1 + f1 conj(Zbar f1)
    ZF = m.Zf2 + 1j * (f1b * m.Zf1 + m.v1 * np.conj(m.Zbf1))
    ZbF = m.Zbf2 + 1j * (f1b * m.Zbf1 + m.v1 * np.conj(m.Zf1))
    return mu, ZbF - mu * ZF


def distortion(f: ContactMap, p: HPoint):
    """``(|Z f1| + |Zbar f1|) / (|Z f1| - |Zbar f1|)``."""
    m = _MapJets(f, p)
    a, b = np.abs(m.Zf1), np.abs(m.Zbf1)
    bad = ~(b < a)
    if np.any(bad):
        _degenerate(m, bad, "|Zbar f1| >= |Z f1|: distortion undefined")
    return (a + b) / (a - b)


def jacobian_det(f: ContactMap, p: HPoint):
    """Determinant of the real Jacobian of ``(Re f1, Im f1, f2)``."""
    x, y, t = np.broadcast_arrays(p.x, p.y, p.t)
    out = f.fns(*J.seed(x, y, t))
    rows = []
    for c in out:
        g = [np.broadcast_to(np.real(0 if J._is_zero(gi) else gi), x.shape) for gi in c.grad]
        rows.append(np.stack(g, axis=-1))
    return np.linalg.det(np.stack(rows, axis=-2))


def _chunks(p: HPoint, size=CHUNK):
    q = p.ravel()
    return [q.take(slice(k, k + size)) for k in range(0, q.size, size)]


def max_distortion(f: ContactMap, sampler, rng=None, grid=64, n_random=10_000):
    """Largest distortion over a grid plus random points (a lower bound of the ess-sup)."""
    rng = np.random.default_rng(0) if rng is None else rng
    pts = HPoint.concat([sampler.grid(grid), sampler.sample(rng, n_random)])
    return float(max(np.max(k) for k in ordered_map(lambda c: distortion(f, c), _chunks(pts))))


def mean_distortion(f: ContactMap, rho, domain, rtol=1e-7):
    """``int K(p, f)^2 rho^4 dL^3`` in the domain's adapted coordinates."""
    return domain.integrate(lambda p: distortion(f, p) ** 2 * rho(p) ** 4,
                            radial_alpha=getattr(rho, "radial_alpha", None), rtol=rtol)


class Density:
    """Nonnegative density ``rho``.

    ``radial_alpha`` records the strength of an axis singularity of the
    energy integrand in cylindrical coordinates (``rho^4 r ~ r^-alpha``),
    which quadrature removes by substitution.
    """

    def __init__(self, fn, name="rho", domain=None, radial_alpha=None):
        self.fn = fn
        self.name = name
        self.domain = domain
        self.radial_alpha = radial_alpha

    def __call__(self, p: HPoint):
        v = np.asarray(self.fn(p), dtype=float)
        return np.broadcast_to(v, p.shape)

    def scaled(self, c):
        return Density(lambda p: c * self.fn(p), f"{c}*{self.name}", self.domain, self.radial_alpha)
