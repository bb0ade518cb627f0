"""Scalar fields on Heisenberg domains and the frame operators Z, Zbar, T.

A field wraps a function ``fn(x, y, t)`` written against the elementary
functions of :mod:`hckit.jets`.  Because ``fn`` works on arrays and on jets
alike, derived fields (``Z(f)``, ``ZZbar(f)``, ...) are fields too and can be
differentiated again, which gives third order derivatives by nesting.

Conventions::

    Z    = d/dz    + i zbar d/dt
    Zbar = d/dzbar - i z    d/dt
    T    = d/dt

so that ``Zbar Z - Z Zbar = 2i T``.
"""
from __future__ import annotations

import numpy as np

from . import jets as J
from .errors import DomainError
from .heisenberg import HPoint
from .jets import Jet2, _add, _is_zero, _mul

__all__ = [
    "ScalarField", "Domain", "coord_z", "coord_zbar", "coord_t", "coord_x", "coord_y",
    "constant", "polynomial", "random_polynomial", "cr_function_Pi",
    "Z", "Zbar", "T", "ZZbar", "ZbarZ", "Zbar2", "Z2", "ZT", "ZbarT", "TT",
    "eval_Z", "eval_Zbar", "eval_T", "eval_ZZbar", "eval_ZbarZ", "eval_Zbar2", "eval_Z2",
    "eval_ZT", "eval_ZbarT", "eval_TT", "cr_defect", "frame_derivatives",
]


class Domain:
    """Membership predicate on points; ``None`` predicate means all of the group."""

    def __init__(self, name="H", contains=None):
        self.name = name
        self._contains = contains

    def contains(self, p: HPoint):
        if self._contains is None:
            return np.ones(p.shape, dtype=bool)
        return np.asarray(self._contains(p), dtype=bool)

    def __repr__(self):
        return f"Domain({self.name!r})"


WHOLE_GROUP = Domain()


def _as_array(v, shape):
    if isinstance(v, Jet2):
        raise TypeError("expected a plain value")
    return np.broadcast_to(np.asarray(v, dtype=complex), shape).copy()


def _lin(coeffs, comps):
    """sum c_i * u_i skipping structural zeros."""
    out = 0
    for c, u in zip(coeffs, comps):
        out = _add(out, _mul(c, u))
    return out


def _quad(u, v, J2):
    out = 0
    for i in range(3):
        if _is_zero(u[i]):
            continue
        for j in range(3):
            if _is_zero(v[j]):
                continue
            out = _add(out, _mul(u[i] * v[j], J2.d(i, j)))
    return out


class frame_derivatives:
    """Frame derivatives read off a jet ``jet`` taken at horizontal coordinate ``z``."""

    def __init__(self, jet: Jet2, z):
        self.jet = jet
        zb = J.conj(z)
        # coefficient vectors on (d/dx, d/dy, d/dt)
        self.a = (0.5, 0.5j, -1j * z)  # Zbar
        self.b = (0.5, -0.5j, 1j * zb)  # Z

    def Z(self):
        return _lin(self.b, self.jet.grad)

    def Zbar(self):
        return _lin(self.a, self.jet.grad)

    def T(self):
        return self.jet.grad[2]

    def ZZbar(self):
        return _add(_quad(self.b, self.a, self.jet), _mul(-1j, self.jet.grad[2]))

    def ZbarZ(self):
        return _add(_quad(self.a, self.b, self.jet), _mul(1j, self.jet.grad[2]))

    def Zbar2(self):
        return _quad(self.a, self.a, self.jet)

    def Z2(self):
        return _quad(self.b, self.b, self.jet)

    def ZT(self):
        return _lin(self.b, (self.jet.d(0, 2), self.jet.d(1, 2), self.jet.d(2, 2)))

    def ZbarT(self):
        return _lin(self.a, (self.jet.d(0, 2), self.jet.d(1, 2), self.jet.d(2, 2)))

    def TT(self):
        return self.jet.d(2, 2)


class ScalarField:
    """Complex field ``fn(x, y, t)`` with exact jets."""

    def __init__(self, fn, name="f", domain=None):
        self.fn = fn
        self.name = name
        self.domain = domain if domain is not None else WHOLE_GROUP

    def __repr__(self):
        return f"ScalarField({self.name!r})"

    def check_domain(self, p: HPoint):
        inside = self.domain.contains(p)
        if not np.all(inside):
            bad = p.take(np.flatnonzero(~np.ravel(inside))[:5])
            raise DomainError(f"{self.name}: points outside {self.domain.name}: z={bad.z}, t={bad.t}")

    def __call__(self, p: HPoint):
        return _as_array(self.fn(p.x, p.y, p.t), p.shape)

    def jet(self, p: HPoint) -> Jet2:
        x, y, t = np.broadcast_arrays(p.x, p.y, p.t)
        v = self.fn(*J.seed(x, y, t))
        if not isinstance(v, Jet2):
            return Jet2(_as_array(v, x.shape))
        return v

    # -- arithmetic -------------------------------------------------------
    def _binary(self, other, op, sym):
        if isinstance(other, ScalarField):
            return ScalarField(lambda x, y, t: op(self.fn(x, y, t), other.fn(x, y, t)),
                               f"({self.name}{sym}{other.name})", self.domain)
        return ScalarField(lambda x, y, t: op(self.fn(x, y, t), other), f"({self.name}{sym}{other!r})", self.domain)

    def _rbinary(self, other, op, sym):
        return ScalarField(lambda x, y, t: op(other, self.fn(x, y, t)), f"({other!r}{sym}{self.name})", self.domain)

    def __add__(self, o):
        return self._binary(o, lambda a, b: a + b, "+")

    def __radd__(self, o):
        return self._rbinary(o, lambda a, b: a + b, "+")

    def __sub__(self, o):
        return self._binary(o, lambda a, b: a - b, "-")

    def __rsub__(self, o):
        return self._rbinary(o, lambda a, b: a - b, "-")

    def __mul__(self, o):
        return self._binary(o, lambda a, b: a * b, "*")

    def __rmul__(self, o):
        return self._rbinary(o, lambda a, b: a * b, "*")

    def __truediv__(self, o):
        return self._binary(o, lambda a, b: a / b, "/")

    def __rtruediv__(self, o):
        return self._rbinary(o, lambda a, b: a / b, "/")

    def __neg__(self):
        return ScalarField(lambda x, y, t: -self.fn(x, y, t), f"-{self.name}", self.domain)

    def __pow__(self, k):
        return ScalarField(lambda x, y, t: J.power(self.fn(x, y, t), k), f"{self.name}^{k}", self.domain)

    def conj(self):
        return ScalarField(lambda x, y, t: J.conj(self.fn(x, y, t)), f"conj({self.name})", self.domain)

    def map(self, fn, name):
        """Apply a pointwise elementary function (from :mod:`hckit.jets`)."""
        return ScalarField(lambda x, y, t: fn(self.fn(x, y, t)), name, self.domain)

    def with_domain(self, domain):
        return ScalarField(self.fn, self.name, domain)

    def renamed(self, name):
        return ScalarField(self.fn, name, self.domain)


# -- constructors ----------------------------------------------------------------
def coord_z():
    return ScalarField(lambda x, y, t: x + 1j * y, "z")


def coord_zbar():
    return ScalarField(lambda x, y, t: x - 1j * y, "zbar")


def coord_t():
    return ScalarField(lambda x, y, t: t, "t")


def coord_x():
    return ScalarField(lambda x, y, t: x, "x")


def coord_y():
    return ScalarField(lambda x, y, t: y, "y")


def constant(c, name=None):
    return ScalarField(lambda x, y, t: c, name or repr(c))


def cr_function_Pi():
    """The CR function t + i|z|^2."""
    return ScalarField(lambda x, y, t: t + 1j * (x * x + y * y), "Pi")


def polynomial(coeffs, name=None):
    """Sum of ``c * z^a zbar^b t^c`` given ``{(a, b, c): coefficient}``."""
    terms = [(tuple(int(e) for e in k), complex(v)) for k, v in sorted(coeffs.items())]

    def fn(x, y, t):
        z = x + 1j * y
        zb = x - 1j * y
        out = 0
        for (a, b, c), coef in terms:
            m = coef
            if a:
                m = m * z**a
            if b:
                m = m * zb**b
            if c:
                m = m * t**c
            out = out + m
        return out

    return ScalarField(fn, name or "poly" + repr(dict(terms)))


def random_polynomial(rng: np.random.Generator, degree=3, n_terms=6):
    coeffs = {}
    while len(coeffs) < n_terms:
        a, b, c = rng.integers(0, degree + 1, size=3)
        if a + b + c <= degree:
            coeffs[(a, b, c)] = complex(rng.normal(), rng.normal())
    return polynomial(coeffs)


# -- derived fields ---------------------------------------------------------------
def _derived(op_name):
    def make(f: ScalarField) -> ScalarField:
        def fn(x, y, t):
            inner = f.fn(*J.seed(x, y, t))
            if not isinstance(inner, Jet2):
                return 0
            return getattr(frame_derivatives(inner, x + 1j * y), op_name)()

        return ScalarField(fn, f"{op_name}({f.name})", f.domain)

    make.__name__ = op_name
    make.__doc__ = f"The field {op_name} f."
    return make


Z = _derived("Z")
Zbar = _derived("Zbar")
T = _derived("T")
ZZbar = _derived("ZZbar")
ZbarZ = _derived("ZbarZ")
Zbar2 = _derived("Zbar2")
Z2 = _derived("Z2")
ZT = _derived("ZT")
ZbarT = _derived("ZbarT")
TT = _derived("TT")


# -- pointwise evaluation -------------------------------------------------------------
def _evaluator(op_name):
    def ev(f: ScalarField, p: HPoint):
        f.check_domain(p)
        v = getattr(frame_derivatives(f.jet(p), p.z), op_name)()
        return _as_array(v, p.shape)

    ev.__name__ = "eval_" + op_name
    ev.__doc__ = f"{op_name} f evaluated at the points p."
    return ev


eval_Z = _evaluator("Z")
eval_Zbar = _evaluator("Zbar")
eval_T = _evaluator("T")
eval_ZZbar = _evaluator("ZZbar")
eval_ZbarZ = _evaluator("ZbarZ")
eval_Zbar2 = _evaluator("Zbar2")
eval_Z2 = _evaluator("Z2")
eval_ZT = _evaluator("ZT")
eval_ZbarT = _evaluator("ZbarT")
eval_TT = _evaluator("TT")


def cr_defect(f: ScalarField, p: HPoint):
    """Zbar f at p; vanishes exactly where f is CR."""
    return _as_array(frame_derivatives(f.jet(p), p.z).Zbar(), p.shape)
