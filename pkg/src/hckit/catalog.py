"""Named domains, maps, curve families and densities of the worked examples.

Every object is built from a parameter record ``{a, b, c, a_p, b_p, c_p, k, D}``
(primed values carry a ``_p`` suffix).  Maps are stored in Heisenberg
coordinates; the annulus maps, natural in logarithmic coordinates, are
conjugated into ``(z, t)`` in closed form so jets pass straight through.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import jets as J
from .errors import ParameterConstraintViolated, UnknownIdentifier
from .fields import Domain, ScalarField
from .heisenberg import ETA_PERIOD, HPoint, heis_norm
from .moduli import CurveFamily
from .qc import ContactMap, Density, beltrami
from .quadratic import QUADRATIC_DIFFERENTIALS, load_qd
from .quadrature import integrate_3d

AXIS_TUBE = 1e-6
CONSTRAINT_RTOL = 1e-12

DEFAULTS = {
    "ex1": {"a": 2.0, "b": 1.0, "c": 1.0, "a_p": 3.0, "b_p": 2.0, "c_p": 3.0},
    "ex2": {"a": 2.0, "b": 1.0, "c": math.pi / 2, "a_p": 3.0, "b_p": 2.0, "c_p": 3 * math.pi / 8},
    "ex3": {"a": 2.0, "k": 0.5, "D": 0.3},
    "cyl": {"a": 1.0, "b": 1.0, "a_p": 1.0, "b_p": 2.0},
    "d": {"a": 1.0, "b": 1.0, "a_p": 2.0 / 3.0, "b_p": 3.0},
}
EXAMPLES = tuple(DEFAULTS)


def params_for(example, params=None):
    if example not in DEFAULTS:
        raise UnknownIdentifier(example)
    out = dict(DEFAULTS[example])
    for key, value in (params or {}).items():
        if value is not None:
            out[key] = float(value)
    return out


def _positive(p, *keys):
    for key in keys:
        if not p[key] > 0:
            raise ParameterConstraintViolated(f"{key} must be positive, got {p[key]}")


def _close(lhs, rhs):
    return abs(lhs - rhs) <= CONSTRAINT_RTOL * max(abs(lhs), abs(rhs))


# -- domains --------------------------------------------------------------------------
@dataclass
class NamedDomain:
    """A domain with an adapted coordinate box.

    ``to_point(u, v, w)`` maps the box ``ranges`` onto the domain and
    ``jacobian`` is the Lebesgue volume element in those coordinates.
    ``radial_axis`` names the coordinate measuring distance to the t-axis,
    where axis singularities of densities are removed by substitution.
    """

    identifier: str
    contains: callable
    coords: tuple
    ranges: tuple
    to_point: callable
    jacobian: callable
    radial_axis: int | None = None
    boundary: dict = field(default_factory=dict)
    n_seg: tuple = (2, 2, 2)
    breaks: dict = field(default_factory=dict)

    @property
    def name(self):
        return self.identifier

    def as_domain(self) -> Domain:
        return Domain(self.identifier, self.contains)

    def _axes(self, n):
        return [lo + (np.arange(n) + 0.5) * (hi - lo) / n for lo, hi in self.ranges]

    def _keep(self, p: HPoint) -> HPoint:
        return p.take(np.flatnonzero(np.abs(p.z) >= AXIS_TUBE))

    def grid(self, n=32) -> HPoint:
        """Interior tensor grid of ``n^3`` points in adapted coordinates, minus the axis tube."""
        u, v, w = np.meshgrid(*self._axes(n), indexing="ij")
        return self._keep(self.to_point(u.ravel(), v.ravel(), w.ravel()))

    def sample(self, rng, n) -> HPoint:
        cols = [rng.uniform(lo, hi, n) for lo, hi in self.ranges]
        return self._keep(self.to_point(*cols))

    def integrate(self, g, radial_alpha=None, rtol=1e-7, n_seg=None):
        """``int g dL^3`` by composite Gauss-Legendre in adapted coordinates.

        ``breaks`` maps an axis to interior points where the integrand may
        have a corner; the box is split there.
        """
        singular = [None, None, None]
        if radial_alpha is not None and self.radial_axis is not None:
            singular[self.radial_axis] = radial_alpha

        def integrand(u, v, w):
            return g(self.to_point(u, v, w)) * self.jacobian(u, v, w)

        pieces = []
        for axis, (lo, hi) in enumerate(self.ranges):
            cuts = sorted(b for b in self.breaks.get(axis, ()) if lo < b < hi)
            edges = [lo, *cuts, hi]
            pieces.append([(e0, e1, singular[axis] if e0 == lo else None) for e0, e1 in zip(edges[:-1], edges[1:])])
        total = 0.0
        for pu in pieces[0]:
            for pv in pieces[1]:
                for pw in pieces[2]:
                    box = [(p[0], p[1]) for p in (pu, pv, pw)]
                    total += integrate_3d(integrand, box, n_seg or self.n_seg, singular=(pu[2], pv[2], pw[2]),
                                          rtol=rtol)
        return total

    def volume(self):
        return self.integrate(lambda p: np.ones(p.shape))


def _arg(z):
    return np.mod(np.angle(z), 2.0 * np.pi)


def ex1_domain(a, b, c, identifier="ex1_domain"):
    """Lifted rectangle ``{(z, tau - Im z^2): z in R_{a,b}, 0 < tau < c}``; unit Jacobian."""

    def contains(p):
        tau = p.t + 2.0 * p.x * p.y
        return (p.x > 0) & (p.x < a) & (p.y > 0) & (p.y < b) & (tau > 0) & (tau < c)

    return NamedDomain(
        identifier, contains, ("x", "y", "tau"), ((0.0, a), (0.0, b), (0.0, c)),
        lambda x, y, tau: HPoint.from_xyt(x, y, tau - 2.0 * x * y),
        lambda x, y, tau: np.ones_like(x),
        boundary={"Im z = 0": "bottom face", f"Im z = {b}": "top face"},
    )


def _cyl_domain(identifier, r_lo, r_hi, theta_hi, t_hi, boundary):
    def contains(p):
        r2 = np.abs(p.z) ** 2
        ok = (p.t > 0) & (p.t < t_hi) & (r2 > r_lo**2) & (r2 < r_hi**2)
        if theta_hi < 2.0 * np.pi:
            th = _arg(p.z)
            ok &= (th > 0) & (th < theta_hi)
        return ok

    return NamedDomain(
        identifier, contains, ("r", "theta", "t"), ((r_lo, r_hi), (0.0, theta_hi), (0.0, t_hi)),
        lambda r, th, t: HPoint(r * np.exp(1j * th), t),
        lambda r, th, t: r,
        radial_axis=0 if r_lo == 0 else None,
        boundary=boundary,
    )


def ex2_domain(a, b, c, identifier="ex2_domain"):
    """``{t + i|z|^2 in R_{a,b}, 0 < arg z < c}`` in cylindrical coordinates."""
    if not 0 < c < 2 * np.pi:
        raise ParameterConstraintViolated("the opening angle must lie in (0, 2 pi)")
    return _cyl_domain(identifier, 0.0, math.sqrt(b), c, a, {"|z|^2 = 0": "axis", f"|z|^2 = {b}": "outer wall"})


def cylinder(a, b, identifier="cylinder"):
    """``C_{a,b} = {|z|^2 < b, 0 < t < a}``."""
    return _cyl_domain(identifier, 0.0, math.sqrt(b), 2 * np.pi, a, {"t = 0": "bottom disc", f"t = {a}": "top disc"})


def d_domain(a, b, identifier="d_domain"):
    """``D_{a,b} = {0 < t < a, 1 < |z|^2 < b + 1}``."""
    return _cyl_domain(identifier, 1.0, math.sqrt(b + 1.0), 2 * np.pi, a,
                       {"t = 0": "bottom annulus", f"t = {a}": "top annulus",
                        "|z|^2 = 1": "inner wall", f"|z|^2 = {b + 1}": "outer wall"})


def annulus(a, identifier="annulus"):
    """Spherical annulus ``1 < ||p|| < a`` in logarithmic coordinates.

    The volume element is ``(3/4) e^{2 xi} dxi dpsi deta`` and eta runs
    over one period.
    """
    if not a > 1:
        raise ParameterConstraintViolated("annulus radius must exceed 1")

    def contains(p):
        n = heis_norm(p)
        return (n > 1.0) & (n < a)

    return NamedDomain(
        identifier, contains, ("xi", "psi", "eta"),
        ((0.0, 2.0 * math.log(a)), (-np.pi / 2, np.pi / 2), (0.0, ETA_PERIOD)),
        lambda xi, psi, eta: HPoint(*_log_to_heis(xi, psi, eta)),
        lambda xi, psi, eta: 0.75 * np.exp(2.0 * xi),
        boundary={"||p|| = 1": "inner sphere", f"||p|| = {a}": "outer sphere"},
    )


def _log_to_heis(xi, psi, eta):
    """``(z, t)`` from logarithmic coordinates, in any jet algebra."""
    c = J.cos(psi)
    z = 1j * J.sqrt(c) * J.exp(0.5 * (xi + 1j * (psi - 3.0 * eta)))
    t = -J.sin(psi) * J.exp(xi)
    return z, t


# -- maps ----------------------------------------------------------------------------
@dataclass
class NamedMap:
    identifier: str
    map: ContactMap
    params: dict
    source: NamedDomain
    target: NamedDomain
    horizontal_factor: float | None = None
    vertical_factor: float | None = None


def _cmap(f1, f2, name, inverse=None):
    return ContactMap(ScalarField(f1, name + ".1"), ScalarField(f2, name + ".2"), name, None, inverse)


def ex1_f0(a, b, c, a_p, b_p, c_p, _inverse=True):
    """``(a'x/a + i b'y/b, a'b't/(ab))``."""
    inv = ex1_f0(a_p, b_p, c_p, a, b, c, False) if _inverse else None
    sx, sy, st = a_p / a, b_p / b, a_p * b_p / (a * b)
    return _cmap(lambda x, y, t: sx * x + 1j * sy * y, lambda x, y, t: st * t, "ex1_f0", inv)


def ex2_f0(a, b, c, a_p, b_p, c_p, _inverse=True):
    """``(sqrt(b'/b) |z| e^{i kappa arg z}, a't/a)`` with ``kappa = a'b/(ab')``, arg in [0, 2 pi)."""
    inv = ex2_f0(a_p, b_p, c_p, a, b, c, False) if _inverse else None
    kappa = a_p * b / (a * b_p)
    s = math.sqrt(b_p / b)

    def f1(x, y, t):
        z = x + 1j * y
        return s * J.exp(0.5 * J.log(x * x + y * y) + 1j * kappa * J.angle(z, lower=0.0))

    return _cmap(f1, lambda x, y, t: (a_p / a) * t, "ex2_f0", inv)


def cyl_radicand(a, b, a_p, b_p, r2):
    return (1.0 - a * b_p / (a_p * b)) * r2 + a * b_p / a_p


def cyl_f0(a, b, a_p, b_p):
    """Cylinder map dilating horizontal trajectories of ``Pi^* dw^2`` by ``a'/a``."""
    phase = (1.0 - a_p * b / (a * b_p)) / (2.0 * b)

    def f1(x, y, t):
        z = x + 1j * y
        return math.sqrt(b_p) * z * J.exp(1j * phase * t) / J.sqrt(cyl_radicand(a, b, a_p, b_p, x * x + y * y))

    return _cmap(f1, lambda x, y, t: (a_p / a) * t, "cyl_f0")


def _log_map_fns(k, D):
    """``g_D`` in Heisenberg coordinates; ``D = 0`` is the radial stretch.

    With ``T = tan psi = -t/|z|^2`` and ``T' = T/k + D``,
    ``sqrt(cos psi e^{i psi}) = (1 - iT)^{-1/2}``, so
    ``z' = z sqrt(1 - iT) / sqrt(1 - iT') N^{(k-1)/4} e^{ikD xi/2}`` and
    ``t' = -T' (1 + T'^2)^{-1/2} N^{k/2}`` with ``N = |z|^4 + t^2 = e^{2 xi}``.
    """

    def both(x, y, t):
        r2 = x * x + y * y
        N = r2 * r2 + t * t
        logN = J.log(N)
        Tp = -t / (k * r2) + D
        ratio = J.sqrt(1.0 + 1j * t / r2) / J.sqrt(1.0 - 1j * Tp)
        z1 = (x + 1j * y) * ratio * J.exp(((k - 1.0) / 4.0 + 0.25j * k * D) * logN)
        t1 = -Tp / J.sqrt(1.0 + Tp * Tp) * J.exp(0.5 * k * logN)
        return z1, t1

    return (lambda x, y, t: both(x, y, t)[0]), (lambda x, y, t: both(x, y, t)[1])


def gD(k, D, _inverse=True):
    """``(xi, psi, eta) -> (k xi, atan(tan psi / k + D), eta - k D xi / 3)``.

    Its inverse is ``g`` with parameters ``(1/k, -k D)``.
    """
    inv = gD(1.0 / k, -k * D, False) if _inverse else None
    f1, f2 = _log_map_fns(k, D)
    return _cmap(f1, f2, f"gD({k},{D})" if D else f"radial_stretch({k})", inv)


def radial_stretch(k):
    """``(xi, psi, eta) -> (k xi, atan(tan psi / k), eta)``."""
    return gD(k, 0.0)


def log_map_in_log_coords(k, D, xi, psi, eta):
    """The defining formula of ``g_D`` (reference for tests)."""
    return k * xi, np.arctan(np.tan(psi) / k + D), eta - k * D * xi / 3.0


# -- curve families --------------------------------------------------------------------
def _const(v):
    return lambda *p: v


def ex1_horizontal(a, b, c, **_):
    """``(s + iy, t + 2sy)`` for ``s in (0, a)``; parameters ``(y, t)``."""
    member = lambda p, s: (s + 1j * p[0], p[1] + 2.0 * s * p[0])  # noqa: E731
    return CurveFamily("ex1_horizontal", member, [(0, b), (0, c)], lambda y, t: (0.0 * y, a + 0.0 * y))


def ex1_vertical(a, b, c, **_):
    """``(x + is, t - 2xs)`` for ``s in (0, b)``; parameters ``(x, t)``."""
    member = lambda p, s: (p[0] + 1j * s, p[1] - 2.0 * p[0] * s)  # noqa: E731
    return CurveFamily("ex1_vertical", member, [(0, a), (0, c)], lambda x, t: (0.0 * x, b + 0.0 * x))


def ex2_radii(a, b, c, **_):
    """Cylindrical radii ``(s e^{i theta}, t)`` for ``s in (0, sqrt b)``; parameters ``(theta, t)``."""
    member = lambda p, s: (s * np.exp(1j * p[0]), p[1] + 0.0 * s)  # noqa: E731
    return CurveFamily("ex2_radii", member, [(0, c), (0, a)],
                       lambda th, t: (0.0 * th, math.sqrt(b) + 0.0 * th), singular_alpha=1.0 / 3.0)


def _gamma_z(p, s):
    z = p[0] * np.exp(1j * p[1])
    return z * J.exp(-0.5j * s / (p[0] * p[0])), s


def cyl_horizontal(a, b, **_):
    """``(z e^{-is/(2|z|^2)}, s)`` for ``s in (0, a)``; parameters ``(|z|, arg z)``."""
    return CurveFamily("cyl_horizontal", _gamma_z, [(0, math.sqrt(b)), (0, 2 * np.pi)],
                       lambda r, th: (0.0 * r, a + 0.0 * r))


def ex2_horizontal(a, b, c, **_):
    """Horizontal trajectories inside the sector: ``s in (0, min(a, 2|z|^2 arg z))``."""
    return CurveFamily("ex2_horizontal", _gamma_z, [(0, math.sqrt(b)), (0, c)],
                       lambda r, th: (0.0 * r, np.minimum(a, 2.0 * r * r * th)))


def ann_horizontal(a, **_):
    """``(s, psi, eta - s tan(psi)/3)`` in log coordinates for ``s in (0, 2 log a)``."""

    def member(p, s):
        psi, eta = p
        return _log_to_heis(s, psi, eta - np.tan(psi) * s / 3.0)

    L = 2.0 * math.log(a)
    return CurveFamily("ann_horizontal", member, [(-np.pi / 2, np.pi / 2), (0, ETA_PERIOD)],
                       lambda psi, eta: (0.0 * psi, L + 0.0 * psi))


def ann_vertical(a, **_):
    """``(xi, s, eta)`` in log coordinates for ``s in (-pi/2, pi/2)``."""
    member = lambda p, s: _log_to_heis(p[0] + 0.0 * s, s, p[1] + 0.0 * s)  # noqa: E731
    return CurveFamily("ann_vertical", member, [(0, 2.0 * math.log(a)), (0, ETA_PERIOD)],
                       lambda xi, eta: (-np.pi / 2 + 0.0 * xi, np.pi / 2 + 0.0 * xi))


# -- densities ----------------------------------------------------------------------
def rho0(b, name="rho0"):
    """``2 / (3 b^{1/3} |z|^{1/3})``, extremal for the radii of the sector cylinder."""
    cst = 2.0 / (3.0 * b ** (1.0 / 3.0))
    return Density(lambda p: cst * np.abs(p.z) ** (-1.0 / 3.0), name, radial_alpha=1.0 / 3.0)


def rho_annulus(a, name="rho_ann"):
    """``sqrt|q| / (2 log a) = |z| / (||p||^2 log a)`` for ``q = Pi^* (dw/w)^2``."""
    L = math.log(a)
    return Density(lambda p: np.abs(p.z) / (heis_norm(p) ** 2 * L), name)


def rho_cylinder(a, name="rho_cyl"):
    """``sqrt|q| / a = 2|z| / a`` for ``q = Pi^* dw^2``."""
    return Density(lambda p: 2.0 * np.abs(p.z) / a, name)


# -- constraint checks ------------------------------------------------------------------
def check_ex1(p):
    _positive(p, "a", "b", "c", "a_p", "b_p", "c_p")
    if not _close(p["c_p"] / p["c"], p["a_p"] * p["b_p"] / (p["a"] * p["b"])):
        raise ParameterConstraintViolated("need c'/c = a'b'/(ab)")


def check_ex2(p):
    _positive(p, "a", "b", "c", "a_p", "b_p", "c_p")
    if not (p["c"] < 2 * np.pi and p["c_p"] < 2 * np.pi):
        raise ParameterConstraintViolated("opening angles must lie in (0, 2 pi)")
    if not _close(p["b"] * p["c"] / p["a"], p["b_p"] * p["c_p"] / p["a_p"]):
        raise ParameterConstraintViolated("need bc/a = b'c'/a'")


def check_cyl(p):
    _positive(p, "a", "b", "a_p", "b_p")
    if not p["a"] * p["b_p"] / (p["a_p"] * p["b"]) > 1:
        raise ParameterConstraintViolated("need ab'/(a'b) > 1")


def d_map_exists(p) -> bool:
    return _close(p["a"] * p["b"] / (p["b"] + 1), p["a_p"] * p["b_p"] / (p["b_p"] + 1))


def check_d(p, need_map=True):
    _positive(p, "a", "b", "a_p", "b_p")
    if not p["a"] * (p["b_p"] + 1) / (p["a_p"] * (p["b"] + 1)) > 1:
        raise ParameterConstraintViolated("need a(b'+1)/(a'(b+1)) > 1")
    if need_map and not d_map_exists(p):
        raise ParameterConstraintViolated("no dilating map: ab/(b+1) != a'b'/(b'+1)")


def check_ex3(p):
    if not p["a"] > 1:
        raise ParameterConstraintViolated("need a > 1")
    if not 0 < p["k"] < 1:
        raise ParameterConstraintViolated("need 0 < k < 1")


# -- named constructors ------------------------------------------------------------------
def named_ex1(p):
    check_ex1(p)
    return NamedMap("ex1_f0", ex1_f0(p["a"], p["b"], p["c"], p["a_p"], p["b_p"], p["c_p"]), p,
                    ex1_domain(p["a"], p["b"], p["c"]), ex1_domain(p["a_p"], p["b_p"], p["c_p"], "ex1_target"),
                    p["a_p"] / p["a"], p["b_p"] / p["b"])


def named_ex2(p):
    check_ex2(p)
    return NamedMap("ex2_f0", ex2_f0(p["a"], p["b"], p["c"], p["a_p"], p["b_p"], p["c_p"]), p,
                    ex2_domain(p["a"], p["b"], p["c"]), ex2_domain(p["a_p"], p["b_p"], p["c_p"], "ex2_target"),
                    p["a_p"] / p["a"], math.sqrt(p["b_p"] / p["b"]))


def named_cyl(p):
    check_cyl(p)
    return NamedMap("cyl_f0", cyl_f0(p["a"], p["b"], p["a_p"], p["b_p"]), p,
                    cylinder(p["a"], p["b"]), cylinder(p["a_p"], p["b_p"], "cyl_target"), p["a_p"] / p["a"])


def named_d(p):
    check_d(p)
    m = cyl_f0(p["a"], p["b"] + 1, p["a_p"], p["b_p"] + 1)
    m.name = "d_f0"
    return NamedMap("d_f0", m, p, d_domain(p["a"], p["b"]), d_domain(p["a_p"], p["b_p"], "d_target"),
                    p["a_p"] / p["a"])


def conformal_psi(f, a):
    """The ``psi`` where the Beltrami coefficient of a log map vanishes, or None.

    The distortion of ``g_D`` depends on ``psi`` alone and has a corner
    where ``mu`` passes through zero.  Located by golden-section search on
    ``|mu|^2``.
    """
    dom = annulus(a)
    xi = math.log(a)

    def m2(psi):
        psi = np.atleast_1d(np.asarray(psi, dtype=float))
        return np.abs(beltrami(f, dom.to_point(xi + 0 * psi, psi, 1.0 + 0 * psi))) ** 2

    grid = np.linspace(-np.pi / 2, np.pi / 2, 2049)[1:-1]
    i = int(np.argmin(m2(grid)))
    if i in (0, grid.size - 1):
        return None
    lo, hi = grid[i - 1], grid[i + 1]
    g = (math.sqrt(5) - 1) / 2
    for _ in range(80):
        m1, m2_ = hi - g * (hi - lo), lo + g * (hi - lo)
        if m2(m1)[0] < m2(m2_)[0]:
            hi = m2_
        else:
            lo = m1
    x = 0.5 * (lo + hi)
    return float(x) if math.sqrt(m2(x)[0]) < 1e-6 else None


def named_log_map(p, D=None):
    check_ex3(p)
    D = p["D"] if D is None else D
    ident = "gD" if D else "radial_stretch"
    k = p["k"]
    f = gD(k, D)
    src, dst = annulus(p["a"]), annulus(p["a"] ** k, "annulus_target")
    psi = conformal_psi(f, p["a"])
    if psi is not None:
        src.breaks = {1: (psi,)}
        dst.breaks = {1: (math.atan(math.tan(psi) / k + D),)}
    return NamedMap(ident, f, dict(p, D=D), src, dst, k)


_CALL = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_']*)\s*(?:\((.*)\))?\s*$")

_EXAMPLE_OF = {
    "ex1_domain": "ex1", "ex1_target": "ex1", "ex1_f0": "ex1", "ex1_horizontal": "ex1", "ex1_vertical": "ex1",
    "ex2_domain": "ex2", "ex2_target": "ex2", "ex2_f0": "ex2", "ex2_radii": "ex2", "ex2_horizontal": "ex2",
    "rho0": "ex2", "rho0_target": "ex2",
    "cylinder": "cyl", "cyl_target": "cyl", "cyl_f0": "cyl", "cyl_horizontal": "cyl", "rho_cyl": "cyl",
    "d_domain": "d", "d_target": "d", "d_f0": "d",
    "annulus": "ex3", "annulus_target": "ex3", "radial_stretch": "ex3", "gD": "ex3",
    "ann_horizontal": "ex3", "ann_vertical": "ex3", "rho_ann": "ex3", "rho_ann_target": "ex3",
}
IDENTIFIERS = tuple(sorted(set(_EXAMPLE_OF) | set(QUADRATIC_DIFFERENTIALS)))


def example_of(identifier):
    m = _CALL.match(identifier)
    if not m:
        raise UnknownIdentifier(identifier)
    return _EXAMPLE_OF.get(m.group(1))


def load(identifier, params=None):
    """Construct the catalog object named by ``identifier``.

    ``radial_stretch(k)`` and ``gD(k, D)`` accept their parameters inline.
    """
    m = _CALL.match(identifier)
    if not m:
        raise UnknownIdentifier(identifier)
    name, args = m.group(1), m.group(2)
    if name in QUADRATIC_DIFFERENTIALS and args is None:
        return load_qd(name)
    if name not in _EXAMPLE_OF:
        raise UnknownIdentifier(identifier)
    p = params_for(_EXAMPLE_OF[name], params)
    if args is not None:
        try:
            vals = [float(v) for v in args.split(",") if v.strip()]
        except ValueError as exc:
            raise UnknownIdentifier(identifier) from exc
        keys = {"radial_stretch": ("k",), "gD": ("k", "D")}.get(name)
        if keys is None or len(vals) != len(keys):
            raise UnknownIdentifier(identifier)
        p.update(zip(keys, vals))
    a, b = p.get("a"), p.get("b")
    table = {
        "ex1_domain": lambda: ex1_domain(a, b, p["c"]),
        "ex1_target": lambda: ex1_domain(p["a_p"], p["b_p"], p["c_p"], "ex1_target"),
        "ex1_f0": lambda: named_ex1(p),
        "ex1_horizontal": lambda: ex1_horizontal(**p),
        "ex1_vertical": lambda: ex1_vertical(**p),
        "ex2_domain": lambda: ex2_domain(a, b, p["c"]),
        "ex2_target": lambda: ex2_domain(p["a_p"], p["b_p"], p["c_p"], "ex2_target"),
        "ex2_f0": lambda: named_ex2(p),
        "ex2_radii": lambda: ex2_radii(**p),
        "ex2_horizontal": lambda: ex2_horizontal(**p),
        "rho0": lambda: rho0(b),
        "rho0_target": lambda: rho0(p["b_p"], "rho0_target"),
        "cylinder": lambda: cylinder(a, b),
        "cyl_target": lambda: cylinder(p["a_p"], p["b_p"], "cyl_target"),
        "cyl_f0": lambda: named_cyl(p),
        "cyl_horizontal": lambda: cyl_horizontal(a, b),
        "rho_cyl": lambda: rho_cylinder(a),
        "d_domain": lambda: d_domain(a, b),
        "d_target": lambda: d_domain(p["a_p"], p["b_p"], "d_target"),
        "d_f0": lambda: named_d(p),
        "annulus": lambda: annulus(a),
        "annulus_target": lambda: (check_ex3(p), annulus(a ** p["k"], "annulus_target"))[1],
        "radial_stretch": lambda: named_log_map(p, 0.0),
        "gD": lambda: named_log_map(p),
        "ann_horizontal": lambda: ann_horizontal(a),
        "ann_vertical": lambda: ann_vertical(a),
        "rho_ann": lambda: rho_annulus(a),
        "rho_ann_target": lambda: (check_ex3(p), rho_annulus(a ** p["k"], "rho_ann_target"))[1],
    }
    return table[name]()


def verify(example, params=None, tol=None, rng=None):
    """Run every check of one example; see :mod:`hckit.verification`."""
    from .verification import verify_example

    return verify_example(example, params, tol, rng)
