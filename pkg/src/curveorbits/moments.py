"""Moment-map evaluations for the ambient (left) and reparametrisation (right) actions."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .densities import Augmentation, OneFormDensity, pullback_density
from .fields import HamiltonianSpec, VectorField, grid_gaussians
from .geometry import DiscreteCurve
from .phase import CotangentPoint, moment_right_density

TANGENCY_RTOL = 1e-10


class TangencyError(ValueError):
    """The dipole field became tangent to its curve."""


def moment_left(p: CotangentPoint, X: VectorField) -> float:
    """``<J_L(phi, alpha), X> = int_S alpha(X o phi)``."""
    vals = X.value(p.nodes)
    return float(np.sum(p.weights * np.einsum("ij,ij->i", p.wc, vals)))


def moment_right(p: CotangentPoint) -> OneFormDensity:
    """``J_R(phi, alpha) = phi^* alpha`` per component."""
    return moment_right_density(p)


class ReducedPairing(NamedTuple):
    total: float
    normal: float
    tangential: float


def moment_reduced_level(curve: DiscreteCurve, gamma: Augmentation, X: VectorField) -> ReducedPairing:
    """``int_N gamma(X)`` split as ``int gamma_perp(X_perp) + int gamma_T(X_T)``.

    The split uses the Euclidean metric: ``gamma_T`` is the tangential part
    (the decorated density ``rho_N``), ``gamma_perp`` the conormal part.
    """
    v = curve.velocity()
    speed = np.hypot(v[:, 0], v[:, 1])
    if np.min(speed) < 1e-12:
        raise ValueError("degenerate tangent")
    t = v / speed[:, None]
    P = gamma.wc
    x = X.value(curve.nodes)
    p_t = np.einsum("ij,ij->i", P, t)
    x_t = np.einsum("ij,ij->i", x, t)
    P_perp = P - p_t[:, None] * t
    x_perp = x - x_t[:, None] * t
    ds = curve.ds
    total = float(np.sum(np.einsum("ij,ij->i", P, x)) * ds)
    normal = float(np.sum(np.einsum("ij,ij->i", P_perp, x_perp)) * ds)
    tangential = float(np.sum(p_t * x_t) * ds)
    return ReducedPairing(total, normal, tangential)


def dipole_density(curve: DiscreteCurve, u) -> np.ndarray:
    """``r(s) = (i_u mu)(phi') = u_x y' - u_y x'``."""
    v = curve.velocity()
    u = np.asarray(u, dtype=float)
    return u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]


def moment_dipole(d, h: HamiltonianSpec) -> float:
    """``<(C, [u]), X_h> = int_C dh(u) |iota^* i_u mu|`` for a dipole loop ``d``."""
    curve, u = d.curve, np.asarray(d.u, dtype=float)
    r = dipole_density(curve, u)
    v = curve.velocity()
    scale = np.hypot(u[:, 0], u[:, 1]) * np.hypot(v[:, 0], v[:, 1])
    bad = np.nonzero(np.abs(r) < TANGENCY_RTOL * scale)[0]
    if bad.size:
        raise TangencyError(f"tangency violation at node {int(bad[0])}")
    dh_u = np.einsum("ij,ij->i", h.grad(curve.nodes), u)
    return float(np.sum(dh_u * np.abs(r)) * curve.ds)


def standard_battery(lo, hi, shape=(8, 5), sigma=None):
    """Gaussian bumps on a fixed grid over a box (40 by default)."""
    return grid_gaussians(lo, hi, shape, sigma)


def separating_hamiltonian(values_a, values_b, atol=1e-8):
    """Index of the first battery member whose moments differ by more than ``atol``, else None."""
    diff = np.abs(np.asarray(values_a) - np.asarray(values_b))
    idx = np.nonzero(diff > atol)[0]
    return int(idx[0]) if idx.size else None
