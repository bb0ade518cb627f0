"""Composite Gauss-Legendre rules in one and three dimensions.

Endpoint singularities of power type ``(s - a)^(-alpha)`` are removed by the
substitution ``s = a + L v^(1/(1-alpha))``, after which the integrand is
smooth in ``v``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureNotConverged

NODES_PER_SEGMENT = 16


@lru_cache(maxsize=None)
def gl_nodes(n: int):
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def nodes_1d(a, b, n_seg=1, n_nodes=NODES_PER_SEGMENT, singular_alpha=None):
    """Nodes and weights of a composite rule on [a, b].

    With ``singular_alpha`` set the rule is exact-in-shape for integrands
    behaving like ``(s - a)^(-singular_alpha)`` near ``a``.
    """
    x, w = gl_nodes(n_nodes)
    edges = np.linspace(0.0, 1.0, n_seg + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    v = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    wv = (0.5 * (hi - lo) * w).ravel()
    L = b - a
    if singular_alpha is None:
        return a + L * v, L * wv
    alpha = float(singular_alpha)
    if not alpha < 1.0:
        raise ValueError("singular exponent must be below 1 for an integrable singularity")
    p = 1.0 / (1.0 - alpha)
    s = a + L * v**p
    return s, L * p * v ** (p - 1.0) * wv


def integrate_1d(f, a, b, n_seg=1, n_nodes=NODES_PER_SEGMENT, singular_alpha=None):
    s, w = nodes_1d(a, b, n_seg, n_nodes, singular_alpha)
    return np.sum(w * f(s))


def tensor_nodes(ranges, n_seg=(1, 1, 1), n_nodes=NODES_PER_SEGMENT, singular=(None, None, None)):
    """Tensor product rule; returns three coordinate arrays and the weights, all flat."""
    grids = [nodes_1d(lo, hi, ns, n_nodes, sa) for (lo, hi), ns, sa in zip(ranges, n_seg, singular)]
    mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij")
    wmesh = np.meshgrid(*[g[1] for g in grids], indexing="ij")
    w = wmesh[0] * wmesh[1] * wmesh[2]
    return mesh[0].ravel(), mesh[1].ravel(), mesh[2].ravel(), w.ravel()


def integrate_3d(f, ranges, n_seg=(1, 1, 1), n_nodes=NODES_PER_SEGMENT, singular=(None, None, None),
                 rtol=1e-7, atol=1e-14, chunk=200_000):
    """Integrate ``f(u, v, w)`` over a box with a doubling convergence check.

    The rule is applied with ``n_seg`` and with twice as many segments per
    axis; the finer value is returned when both agree to ``rtol``.
    """
    values = []
    for scale in (1, 2):
        u, v, w3, wt = tensor_nodes(ranges, tuple(scale * n for n in n_seg), n_nodes, singular)
        total = 0.0
        for k in range(0, u.size, chunk):
            sl = slice(k, k + chunk)
            total = total + np.sum(wt[sl] * f(u[sl], v[sl], w3[sl]))
        values.append(total)
    coarse, fine = values
    if abs(fine - coarse) > rtol * abs(fine) + atol:
        raise QuadratureNotConverged(f"refinement changed the integral from {coarse!r} to {fine!r}")
    return fine


def polyline_nodes(vertices, n_seg=1, n_nodes=NODES_PER_SEGMENT):
    """Quadrature nodes along a polyline in (x, y, t) space.

    Returns ``(points, velocity, weights)``: the points as an (N, 3) array,
    the constant velocity of each edge at each node and the weights, so that
    ``sum(w * g(points, velocity))`` integrates a 1-form along the path.
    """
    vertices = np.asarray(vertices, dtype=float)
    s, w = nodes_1d(0.0, 1.0, n_seg, n_nodes)
    pts, vel, wts = [], [], []
    for p0, p1 in zip(vertices[:-1], vertices[1:]):
        pts.append(p0 + s[:, None] * (p1 - p0))
        vel.append(np.broadcast_to(p1 - p0, (s.size, 3)))
        wts.append(w)
    return np.concatenate(pts), np.concatenate(vel), np.concatenate(wts)
