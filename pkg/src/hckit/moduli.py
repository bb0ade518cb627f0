"""Curve families, admissible densities, energies and modulus inequalities."""
from __future__ import annotations

import numpy as np

from . import jets as J
from .errors import NotAdmissible
from .heisenberg import HPoint
from .qc import distortion, max_distortion, mean_distortion
from .quadrature import nodes_1d
from .trajectories import curve_from_closed_form


class CurveFamily:
    """Legendrian curves ``member(params, s) -> (z, t)`` indexed by a box of parameters.

    ``s_range(params)`` gives the parameter interval of each member and
    ``singular_alpha`` the strength of a power singularity of the line
    integrands at its lower end (None when smooth).
    """

    def __init__(self, name, member, param_ranges, s_range, domain=None, singular_alpha=None):
        self.name = name
        self.member = member
        self.param_ranges = [tuple(map(float, r)) for r in param_ranges]
        self.s_range = s_range
        self.domain = domain
        self.singular_alpha = singular_alpha

    def grid(self, n=64):
        """Tensor grid of interior parameter values, flattened."""
        axes = [lo + (np.arange(n) + 0.5) * (hi - lo) / n for lo, hi in self.param_ranges]
        mesh = np.meshgrid(*axes, indexing="ij")
        return tuple(m.ravel() for m in mesh)

    def curve(self, params, n_samples=201, name=None):
        lo, hi = self.s_range(*[np.asarray(p, dtype=float) for p in params])
        s = np.linspace(float(lo), float(hi), n_samples)
        fn = lambda u: self.member(tuple(float(p) for p in params), u)  # noqa: E731
        return curve_from_closed_form(fn, s, name or f"{self.name}{tuple(float(p) for p in params)}")

    def mapped(self, f, name=None):
        """The image family ``f(Gamma)``."""
        member = self.member

        def image(params, s):
            z, t = member(params, s)
            x1, y1, t1 = f.fns(J.real(z), J.imag(z), J.real(t))
            return x1 + 1j * y1, t1

        return CurveFamily(name or f"{f.name}({self.name})", image, self.param_ranges, self.s_range,
                           None, self.singular_alpha)

    def line_integrals(self, rho, params, n_seg=4, n_nodes=16):
        """``int rho(gamma(s)) |zdot(s)| ds`` for every parameter tuple (arrays)."""
        params = [np.asarray(p, dtype=float)[:, None] for p in params]
        lo, hi = self.s_range(*params)
        lo = np.broadcast_to(lo, params[0].shape)
        hi = np.broadcast_to(hi, params[0].shape)
        v, w = nodes_1d(0.0, 1.0, n_seg, n_nodes, self.singular_alpha)
        s = lo + (hi - lo) * v[None, :]
        zj, tj = self.member(tuple(params), J.seed1(s))
        z = np.broadcast_to(J.base_value(zj), s.shape)
        t = np.broadcast_to(np.real(J.base_value(tj)), s.shape)
        zd = np.broadcast_to(zj.grad[0] if isinstance(zj, J.Jet2) else 0.0, s.shape)
        vals = rho(HPoint(z, t)) * np.abs(zd)
        return np.sum((hi - lo) * w[None, :] * vals, axis=1)


def admissibility_margin(rho, fam: CurveFamily, grid=64, chunk=4096, **quad) -> float:
    """Minimum over the parameter grid of ``int_gamma rho dl``; admissible means >= 1."""
    params = fam.grid(grid)
    out = []
    for k in range(0, params[0].size, chunk):
        out.append(fam.line_integrals(rho, [p[k:k + chunk] for p in params], **quad))
    return float(np.min(np.concatenate(out)))


def energy(rho, domain, rtol=1e-7) -> float:
    """``int rho^4 dL^3`` in the domain's adapted coordinates."""
    return domain.integrate(lambda p: rho(p) ** 4, radial_alpha=getattr(rho, "radial_alpha", None), rtol=rtol)


def modulus_upper_bound(fam: CurveFamily, rho, domain, tol=1e-9, grid=64) -> float:
    """Energy of an admissible density, an upper bound for the modulus of ``fam``."""
    margin = admissibility_margin(rho, fam, grid)
    if margin < 1.0 - tol:
        raise NotAdmissible(f"{rho.name}: min line integral {margin:.6g} < 1 on {fam.name}")
    return energy(rho, domain)


def _holds(lhs, rhs, slack):
    return bool(lhs <= rhs + slack * max(1.0, abs(rhs)))


def check_distortion_inequalities(f, fam, rho_src, rho_dst, domain_src, domain_dst, slack=1e-6,
                                  tol=1e-9, grid=32, rng=None, K_grid=64, K_random=10_000) -> dict:
    """Both sides of the three modulus-distortion inequalities.

    The moduli are represented by the energies of the supplied densities,
    which must be admissible for the family and its image.  ``K_f`` is the
    sampled maximal distortion.
    """
    image = fam.mapped(f)
    m_src = admissibility_margin(rho_src, fam, grid)
    m_dst = admissibility_margin(rho_dst, image, grid)
    if m_src < 1.0 - tol:
        raise NotAdmissible(f"source density margin {m_src:.6g} < 1")
    if m_dst < 1.0 - tol:
        raise NotAdmissible(f"image density margin {m_dst:.6g} < 1")
    M_src = energy(rho_src, domain_src)
    M_dst = energy(rho_dst, domain_dst)
    if f.inverse is None:
        raise ValueError("the first inequality needs the inverse map")
    inv = f.inverse
    I1 = domain_dst.integrate(lambda x: distortion(f, inv(x)) ** 2 * rho_dst(x) ** 4,
                              radial_alpha=getattr(rho_dst, "radial_alpha", None))
    I2 = mean_distortion(f, rho_src, domain_src)
    Kf = max_distortion(f, domain_src, rng=rng, grid=K_grid, n_random=K_random)
    ineq = [
        {"name": "M(G) <= int K(f^-1)^2 rho'^4", "lhs": M_src, "rhs": I1},
        {"name": "M(f(G)) <= int K^2 rho^4", "lhs": M_dst, "rhs": I2},
        {"name": "M(G)/K_f^2 <= M(f(G))", "lhs": M_src / Kf**2, "rhs": M_dst},
        {"name": "M(f(G)) <= K_f^2 M(G)", "lhs": M_dst, "rhs": Kf**2 * M_src},
    ]
    for row in ineq:
        row["holds"] = _holds(row["lhs"], row["rhs"], slack)
    return {
        "family": fam.name,
        "density": rho_src.name,
        "image_density": rho_dst.name,
        "margin": m_src,
        "image_margin": m_dst,
        "energy": M_src,
        "image_energy": M_dst,
        "modulus_upper_bound": M_src,
        "K_max": Kf,
        "inequalities": ineq,
    }
