"""Second-order jets over the three real coordinates ``(x, y, t)``.

A :class:`Jet2` carries a value, the three first partials and the six
distinct second partials of a complex valued quantity.  Components may be
numpy arrays (a batch of points) or themselves :class:`Jet2` objects, which
is how derived fields obtain derivatives of derivatives: a field is written
once against the elementary functions of this module and can then be
evaluated on plain arrays, on jets, or on jets of jets.

Known-zero components are kept as the Python integer ``0`` so that seeds and
constants do not cost arithmetic.
"""
from __future__ import annotations

import numpy as np

# Storage order of the symmetric Hessian.
PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
HESS_INDEX = {}
for _k, (_i, _j) in enumerate(PAIRS):
    HESS_INDEX[(_i, _j)] = _k
    HESS_INDEX[(_j, _i)] = _k
ZERO_GRAD = (0, 0, 0)
ZERO_HESS = (0, 0, 0, 0, 0, 0)


def _is_zero(a) -> bool:
    return type(a) is int and a == 0


def _mul(a, b):
    if _is_zero(a) or _is_zero(b):
        return 0
    return a * b


def _add(a, b):
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return a + b


def _sub(a, b):
    if _is_zero(b):
        return a
    if _is_zero(a):
        return -b
    return a - b


class Jet2:
    __slots__ = ("value", "grad", "hess")
    # keep numpy from broadcasting over jets; defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, value, grad=ZERO_GRAD, hess=ZERO_HESS):
        self.value = value
        self.grad = tuple(grad)
        self.hess = tuple(hess)

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad!r}, hess={self.hess!r})"

    def d(self, i, j=None):
        """First partial ``d/d_i`` or second partial ``d2/(d_i d_j)``."""
        if j is None:
            return self.grad[i]
        return self.hess[HESS_INDEX[(i, j)]]

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return Jet2(-self.value, tuple(_sub(0, g) for g in self.grad), tuple(_sub(0, h) for h in self.hess))

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(
                self.value + other.value,
                tuple(_add(a, b) for a, b in zip(self.grad, other.grad)),
                tuple(_add(a, b) for a, b in zip(self.hess, other.hess)),
            )
        return Jet2(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(
                self.value - other.value,
                tuple(_sub(a, b) for a, b in zip(self.grad, other.grad)),
                tuple(_sub(a, b) for a, b in zip(self.hess, other.hess)),
            )
        return Jet2(self.value - other, self.grad, self.hess)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            av, bv = self.value, other.value
            ag, bg = self.grad, other.grad
            grad = tuple(_add(_mul(ag[i], bv), _mul(av, bg[i])) for i in range(3))
            hess = []
            for k, (i, j) in enumerate(PAIRS):
                h = _add(_mul(self.hess[k], bv), _mul(av, other.hess[k]))
                h = _add(h, _mul(ag[i], bg[j]))
                h = _add(h, _mul(ag[j], bg[i]))
                hess.append(h)
            return Jet2(av * bv, grad, hess)
        if _is_zero(other):
            return 0
        return Jet2(
            self.value * other,
            tuple(_mul(g, other) for g in self.grad),
            tuple(_mul(h, other) for h in self.hess),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * reciprocal(other)
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)):
            p = int(p)
            if p < 0:
                return reciprocal(self) ** (-p)
            result, base = 1, self
            while p:
                if p & 1:
                    result = base * result if not isinstance(result, int) else base
                p >>= 1
                if p:
                    base = base * base
            return Jet2(1) if isinstance(result, int) else result
        v = self.value
        return chain(self, v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))


def chain(u: Jet2, f0, f1, f2) -> Jet2:
    """Jet of ``phi(u)`` given ``phi(u0), phi'(u0), phi''(u0)``."""
    g = tuple(_mul(f1, gi) for gi in u.grad)
    h = tuple(
        _add(_mul(f1, u.hess[k]), _mul(f2, _mul(u.grad[i], u.grad[j]))) for k, (i, j) in enumerate(PAIRS)
    )
    return Jet2(f0, g, h)


def reciprocal(u):
    if not isinstance(u, Jet2):
        return 1.0 / u
    r = reciprocal(u.value)
    r2 = r * r
    return chain(u, r, -r2, 2.0 * r2 * r)


def base_value(u):
    """Innermost (plain array) value of a possibly nested jet."""
    while isinstance(u, Jet2):
        u = u.value
    return u


def constant(c) -> Jet2:
    return Jet2(c)


def seed(x, y, t):
    """Coordinate jets over whatever algebra ``x, y, t`` live in."""
    return Jet2(x, (1, 0, 0)), Jet2(y, (0, 1, 0)), Jet2(t, (0, 0, 1))


def seed1(s):
    """Jet in a single parameter, stored in the first slot."""
    return Jet2(s, (1, 0, 0))


# -- elementary functions ------------------------------------------------------
def _componentwise(u, fn):
    if isinstance(u, Jet2):
        return Jet2(
            _componentwise(u.value, fn),
            tuple(g if _is_zero(g) else _componentwise(g, fn) for g in u.grad),
            tuple(h if _is_zero(h) else _componentwise(h, fn) for h in u.hess),
        )
    return fn(u)


def conj(u):
    return _componentwise(u, np.conj)


def real(u):
    return _componentwise(u, np.real)


def imag(u):
    return _componentwise(u, np.imag)


def exp(u):
    if not isinstance(u, Jet2):
        return np.exp(u)
    e = exp(u.value)
    return chain(u, e, e, e)


def log(u):
    if not isinstance(u, Jet2):
        return np.log(u)
    v = u.value
    r = reciprocal(v)
    return chain(u, log(v), r, -(r * r))


def sqrt(u):
    if not isinstance(u, Jet2):
        return np.sqrt(u)
    v = u.value
    s = sqrt(v)
    return chain(u, s, 0.5 / s, -0.25 / (s * v))


def sin(u):
    if not isinstance(u, Jet2):
        return np.sin(u)
    s, c = sin(u.value), cos(u.value)
    return chain(u, s, c, -s)


def cos(u):
    if not isinstance(u, Jet2):
        return np.cos(u)
    s, c = sin(u.value), cos(u.value)
    return chain(u, c, -s, -c)


def tan(u):
    if not isinstance(u, Jet2):
        return np.tan(u)
    tv = tan(u.value)
    d1 = 1.0 + tv * tv
    return chain(u, tv, d1, 2.0 * tv * d1)


def arctan(u):
    if not isinstance(u, Jet2):
        return np.arctan(u)
    v = u.value
    r = reciprocal(1.0 + v * v)
    return chain(u, arctan(v), r, -2.0 * v * r * r)


def power(u, p):
    if isinstance(u, Jet2):
        return u**p
    return np.power(u, p)


def abs2(u):
    """``|u|^2`` as a real quantity."""
    return real(u * conj(u))


def absval(u):
    return sqrt(abs2(u))


def angle(u, lower=None):
    """Argument of ``u``; with ``lower`` the value is taken in ``[lower, lower + 2 pi)``."""
    if isinstance(u, Jet2):
        a = imag(log(u))
    else:
        a = np.angle(u)
    if lower is None:
        return a
    principal = np.angle(base_value(u))
    shift = np.mod(principal - lower, 2.0 * np.pi) + lower - principal
    return a + shift
