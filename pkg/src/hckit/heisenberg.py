"""Heisenberg group arithmetic and its coordinate systems.

Points are stored as ``(z, t)`` with ``z`` complex and ``t`` real.  Every
function accepts scalars or numpy arrays (broadcast elementwise), so a batch
of points is simply an :class:`HPoint` whose fields are arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OriginNotRepresentable

TWO_PI = 2.0 * np.pi
# eta is defined modulo 4*pi/3: eta -> eta + 4*pi/3 turns the phase of z by -2*pi
ETA_PERIOD = 4.0 * np.pi / 3.0


@dataclass(frozen=True)
class HPoint:
    z: np.ndarray | complex
    t: np.ndarray | float

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=complex))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))

    @property
    def x(self):
        return self.z.real

    @property
    def y(self):
        return self.z.imag

    @property
    def shape(self):
        return np.broadcast_shapes(self.z.shape, self.t.shape)

    @property
    def size(self):
        return int(np.prod(self.shape))

    def ravel(self) -> "HPoint":
        z, t = np.broadcast_arrays(self.z, self.t)
        return HPoint(z.ravel(), t.ravel())

    def take(self, idx) -> "HPoint":
        p = self.ravel()
        return HPoint(p.z[idx], p.t[idx])

    def as_array(self) -> np.ndarray:
        """Real (..., 3) array of (x, y, t)."""
        z, t = np.broadcast_arrays(self.z, self.t)
        return np.stack([z.real, z.imag, t], axis=-1)

    @classmethod
    def from_xyt(cls, x, y, t) -> "HPoint":
        return cls(np.asarray(x) + 1j * np.asarray(y), t)

    @classmethod
    def concat(cls, points) -> "HPoint":
        points = [p.ravel() for p in points]
        return cls(np.concatenate([p.z for p in points]), np.concatenate([p.t for p in points]))


@dataclass(frozen=True)
class LogCoords:
    """Logarithmic coordinates ``(xi, psi, eta)`` of a point off the origin.

    ``psi`` lies in [-pi/2, pi/2]; ``eta`` is folded into
    ``psi - 3*pi <= 3*eta < psi + pi``, which is one full period of eta and
    lies inside the window ``psi - 3*pi <= 2*eta < psi + pi``.
    """

    xi: np.ndarray | float
    psi: np.ndarray | float
    eta: np.ndarray | float

    def normalized(self) -> "LogCoords":
        psi = np.clip(np.asarray(self.psi, dtype=float), -np.pi / 2, np.pi / 2)
        return LogCoords(np.asarray(self.xi, dtype=float), psi, fold_eta(self.eta, psi))


@dataclass(frozen=True)
class CylCoords:
    r: np.ndarray | float
    theta: np.ndarray | float
    t: np.ndarray | float


def group_mul(p: HPoint, q: HPoint) -> HPoint:
    return HPoint(p.z + q.z, p.t + q.t + 2.0 * np.imag(p.z * np.conj(q.z)))


def group_inv(p: HPoint) -> HPoint:
    return HPoint(-p.z, -p.t)


def heis_norm(p: HPoint):
    return (np.abs(p.z) ** 4 + p.t**2) ** 0.25


def heis_dist(p: HPoint, q: HPoint):
    return heis_norm(group_mul(group_inv(p), q))


def fold_eta(eta, psi):
    """Fold eta into ``[(psi - 3 pi)/3, (psi + pi)/3)``."""
    eta = np.asarray(eta, dtype=float)
    lo = (np.asarray(psi, dtype=float) - 3.0 * np.pi) / 3.0
    return lo + np.mod(eta - lo, ETA_PERIOD)


def to_log_coords(p: HPoint) -> LogCoords:
    r2 = np.abs(p.z) ** 2
    if np.any((r2 == 0.0) & (p.t == 0.0)):
        raise OriginNotRepresentable("the origin has no logarithmic coordinates")
    xi = 0.5 * np.log(r2**2 + p.t**2)
    psi = np.arctan2(-p.t, r2)
    # z = i cos^(1/2)(psi) exp((xi + i(psi - 3 eta))/2)  =>  3 eta = psi + pi - 2 arg z
    arg = np.angle(p.z)
    eta = (psi + np.pi - 2.0 * arg) / 3.0
    return LogCoords(xi, psi, fold_eta(eta, psi))


def from_log_coords(c: LogCoords) -> HPoint:
    xi = np.asarray(c.xi, dtype=float)
    psi = np.asarray(c.psi, dtype=float)
    eta = np.asarray(c.eta, dtype=float)
    cos_psi = np.clip(np.cos(psi), 0.0, None)
    z = 1j * np.sqrt(cos_psi) * np.exp(0.5 * (xi + 1j * (psi - 3.0 * eta)))
    t = -np.sin(psi) * np.exp(xi)
    return HPoint(z, t)


def to_cylindrical(p: HPoint) -> CylCoords:
    # np.angle(0) == 0, which is the convention on the axis
    theta = np.mod(np.angle(p.z), TWO_PI)
    theta = np.where(theta >= TWO_PI, 0.0, theta)
    return CylCoords(np.abs(p.z), theta, p.t.copy())


def from_cylindrical(c: CylCoords) -> HPoint:
    return HPoint(np.asarray(c.r) * np.exp(1j * np.asarray(c.theta)), c.t)


def random_points(rng: np.random.Generator, n: int, scale: float = 1.0) -> HPoint:
    """Points with z, t drawn uniformly from a box of half-width ``scale``."""
    x, y, t = rng.uniform(-scale, scale, size=(3, n))
    return HPoint.from_xyt(x, y, t)
