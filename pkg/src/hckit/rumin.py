"""Bidegree-split Rumin operators on coordinate representatives.

Every form is stored as a single coefficient field relative to a canonical
frame for its bidegree:

======  ==============
(p, q)  frame
======  ==============
(0, 0)  1
(1, 0)  [dz]
(0, 1)  [dzbar]
(2, 0)  dz ^ omega
(1, 1)  dzbar ^ omega
(2, 1)  dz ^ dzbar ^ omega
======  ==============

with ``omega = dt - i zbar dz + i z dzbar = dt + 2(x dy - y dx)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields as F
from .errors import NotClosed, PathOutsideDomain
from .fields import ScalarField
from .heisenberg import HPoint
from .quadrature import polyline_nodes

FRAMES = {
    (0, 0): "1",
    (1, 0): "dz",
    (0, 1): "dzbar",
    (2, 0): "dz^w",
    (1, 1): "dzbar^w",
    (2, 1): "dz^dzbar^w",
}
# frames written the other way round differ by a sign
_FLIPPED = {"w^dz": "dz^w", "w^dzbar": "dzbar^w"}

HALF_OVER_I = 1.0 / 2j


@dataclass(frozen=True)
class FormPQ:
    p: int
    q: int
    coeff: ScalarField

    def __post_init__(self):
        if (self.p, self.q) not in FRAMES:
            raise ValueError(f"no forms of bidegree ({self.p}, {self.q})")

    @property
    def frame(self):
        return FRAMES[(self.p, self.q)]

    def coeff_against(self, frame: str) -> ScalarField:
        """Coefficient relative to ``frame``; accepts the reversed wedge orders too."""
        if frame == self.frame:
            return self.coeff
        if _FLIPPED.get(frame) == self.frame:
            return -self.coeff
        raise ValueError(f"frame {frame!r} does not span bidegree ({self.p}, {self.q})")

    def __call__(self, p: HPoint):
        return self.coeff(p)


def _expect(form, p, q):
    if (form.p, form.q) != (p, q):
        raise ValueError(f"expected a ({p},{q})-form, got ({form.p},{form.q})")


def dprime_scalar(f: ScalarField) -> FormPQ:
    return FormPQ(1, 0, F.Z(f))


def dsecond_scalar(f: ScalarField) -> FormPQ:
    return FormPQ(0, 1, F.Zbar(f))


def rumin_D(alpha: FormPQ):
    """(D', D'') of ``[f dz]``: coefficients against dz^w and dzbar^w."""
    _expect(alpha, 1, 0)
    f = alpha.coeff
    d1 = HALF_OVER_I * F.ZZbar(f) - F.T(f)
    d2 = HALF_OVER_I * F.Zbar2(f)
    return FormPQ(2, 0, d1.renamed(f"D'[{f.name} dz]")), FormPQ(1, 1, d2.renamed(f"D''[{f.name} dz]"))


def rumin_D_01(alpha: FormPQ):
    """(D', D+) of ``[f dzbar]``.

    The natural outputs are ``((1/2i) Zbar Z f + T f) w^dzbar`` and
    ``(1/2i) Z^2 f w^dz``; both are stored against the canonical frames,
    hence the sign flips.
    """
    _expect(alpha, 0, 1)
    f = alpha.coeff
    d1 = -(HALF_OVER_I * F.ZbarZ(f) + F.T(f))
    dplus = -(HALF_OVER_I * F.Z2(f))
    return FormPQ(1, 1, d1.renamed(f"D'[{f.name} dzbar]")), FormPQ(2, 0, dplus.renamed(f"D+[{f.name} dzbar]"))


def dprime_F11(beta: FormPQ) -> FormPQ:
    _expect(beta, 1, 1)
    return FormPQ(2, 1, F.Z(beta.coeff))


def dsecond_F20(beta: FormPQ) -> FormPQ:
    _expect(beta, 2, 0)
    return FormPQ(2, 1, -F.Zbar(beta.coeff))


# Relations whose target bundle is zero in real dimension three hold trivially;
# they are listed so reports always carry the full set of names.
TRIVIAL_RELATIONS = ("d''D'' (F12)", "D''d'' (F02)", "d'D+ (F30)", "d'D' (F30)")


def relation_fields(f: ScalarField):
    """The composite fields that must vanish, keyed by relation name."""
    a10 = FormPQ(1, 0, f)
    a01 = FormPQ(0, 1, f)
    Dp10, Dpp10 = rumin_D(a10)
    Dp01, Dplus01 = rumin_D_01(a01)
    out = {
        # d o D on E^{1,0} and E^{0,1}
        "d'D'' + d''D' (E10)": dprime_F11(Dpp10).coeff + dsecond_F20(Dp10).coeff,
        "d'D' + d''D+ (E01)": dprime_F11(Dp01).coeff + dsecond_F20(Dplus01).coeff,
    }
    Ddp = rumin_D(dprime_scalar(f))
    Dds = rumin_D_01(dsecond_scalar(f))
    # D o d on functions, split by target bidegree
    out["D'd' + D+d'' (F20)"] = Ddp[0].coeff + Dds[1].coeff
    out["D''d' + D'd'' (F11)"] = Ddp[1].coeff + Dds[0].coeff
    return out


def identity_suite(f: ScalarField, points: HPoint) -> dict:
    """Maximum absolute defect of every bidegree relation over ``points``."""
    report = {}
    for name, field in relation_fields(f).items():
        report[name] = float(np.max(np.abs(field(points)), initial=0.0))
    for name in TRIVIAL_RELATIONS:
        report[name] = 0.0
    return dict(sorted(report.items()))


# -- primitives --------------------------------------------------------------------
def _as_vertices(base: HPoint, target: HPoint, path):
    if path is None:
        pts = [base, target]
    else:
        pts = [base, *path, target]
    return np.array([[complex(p.z).real, complex(p.z).imag, float(p.t)] for p in pts])


def one_form_integral(coeffs, vertices, n_seg=4):
    """Integrate a 1-form along a polyline.

    ``coeffs(x, y, t)`` returns the components ``(a_x, a_y, a_t)`` of the form
    in the real coframe ``(dx, dy, dt)``.
    """
    pts, vel, w = polyline_nodes(vertices, n_seg)
    ax, ay, at = coeffs(pts[:, 0], pts[:, 1], pts[:, 2])
    return np.sum(w * (ax * vel[:, 0] + ay * vel[:, 1] + at * vel[:, 2]))


def representative_coeffs(f: ScalarField, correction: ScalarField):
    """Real-coframe components of ``f dz + c omega``."""

    def coeffs(x, y, t):
        p = HPoint.from_xyt(x, y, t)
        fv, cv = f(p), correction(p)
        # dz = dx + i dy ; omega = dt - 2y dx + 2x dy
        return fv - 2.0 * y * cv, 1j * fv + 2.0 * x * cv, cv

    return coeffs


def primitive_of_closed_form10(alpha: FormPQ, base: HPoint, target: HPoint, path=None, tol=1e-8, n_seg=4):
    """F(target) - F(base) for the CR function F with d'F = alpha.

    ``path`` is an optional list of intermediate vertices; the integration runs
    along the polyline base -> path... -> target.
    """
    _expect(alpha, 1, 0)
    f = alpha.coeff
    vertices = _as_vertices(base, target, path)
    pts, _, _ = polyline_nodes(vertices, n_seg)
    probe = HPoint.from_xyt(pts[:, 0], pts[:, 1], pts[:, 2])
    inside = f.domain.contains(probe)
    if not np.all(inside):
        raise PathOutsideDomain(f"integration path leaves {f.domain.name}")
    Dp, Dpp = rumin_D(alpha)
    scale = 1.0 + float(np.max(np.abs(f(probe))))
    defect = max(float(np.max(np.abs(Dp(probe)))), float(np.max(np.abs(Dpp(probe)))))
    if defect > tol * scale:
        raise NotClosed(f"D'/D'' defect {defect:.3e} exceeds tolerance")
    coeffs = representative_coeffs(f, HALF_OVER_I * F.Zbar(f))
    return complex(one_form_integral(coeffs, vertices, n_seg))
