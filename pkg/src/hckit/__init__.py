"""Numerical calculus on the Heisenberg group: CR frames and jets, Rumin
operators, quadratic differentials and their trajectories, quasiconformal
distortion and moduli of curve families."""

from .heisenberg import HPoint, group_inv, group_mul, heis_dist, heis_norm
from .errors import HCKitError

__version__ = "0.1.0"

__all__ = ["HPoint", "group_mul", "group_inv", "heis_norm", "heis_dist", "HCKitError", "__version__"]
