"""Discretised regular cotangent bundle of embedding space.

A point is a family of curves ``phi_j`` with augmentations ``alpha_j``; all
per-node quantities are concatenated across components in family order.
Only the weighted covector ``P = w c`` enters the forms, so tangent vectors
store ``(d phi, d P)`` and their flat vector form has ``4 M`` entries for
``M`` nodes in total.

Form conventions::

    theta(xi) = sum_i <P_i, dphi_i> ds_i
    omega(xi1, xi2) = sum_i (<dP2_i, dphi1_i> - <dP1_i, dphi2_i>) ds_i

With these, ``d<J, X>(xi) = omega(zeta_X, xi)`` for every generator, and
``omega = -d theta`` as a 2-form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space

from . import _periodic
from .densities import (Augmentation, OneFormDensity, Reparametrization, compose_curve,
                        epsilon_section, pullback_augmentation, pullback_density, rotate_to_covector)
from .fields import VectorField
from .geometry import DiscreteCurve, enclosed_area


class ShapeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CotangentPoint:
    curves: tuple
    augs: tuple

    def __post_init__(self):
        curves = tuple(self.curves)
        augs = tuple(self.augs)
        if len(curves) != len(augs) or not curves:
            raise ShapeError("need one augmentation per curve")
        for c, a in zip(curves, augs):
            if a.n != c.n:
                raise ShapeError(f"augmentation has {a.n} nodes, curve has {c.n}")
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "augs", augs)

    @classmethod
    def of(cls, curve: DiscreteCurve, aug: Augmentation):
        return cls((curve,), (aug,))

    @property
    def k(self):
        return len(self.curves)

    @property
    def size(self):
        return sum(c.n for c in self.curves)

    def slices(self):
        out, start = [], 0
        for c in self.curves:
            out.append(slice(start, start + c.n))
            start += c.n
        return out

    @property
    def nodes(self):
        return np.vstack([c.nodes for c in self.curves])

    @property
    def wc(self):
        return np.vstack([a.wc for a in self.augs])

    @property
    def weights(self):
        """Quadrature weights ``ds`` per node."""
        return np.concatenate([np.full(c.n, c.ds) for c in self.curves])

    def velocity(self):
        return np.vstack([c.velocity() for c in self.curves])

    def diff(self, f):
        """Per-component periodic derivative of a concatenated per-node array."""
        f = np.asarray(f, dtype=float)
        return np.concatenate([_periodic.diff(f[sl], c.diff) for sl, c in zip(self.slices(), self.curves)])

    def split(self, f):
        return [f[sl] for sl in self.slices()]

    def moved(self, nodes=None, wc=None) -> "CotangentPoint":
        """New point with replaced concatenated nodes and/or weighted covectors.

        The weight split ``w`` of each augmentation is kept.
        """
        curves, augs = [], []
        for j, sl in enumerate(self.slices()):
            c, a = self.curves[j], self.augs[j]
            if nodes is not None:
                c = c.with_nodes(np.asarray(nodes)[sl])
            if wc is not None:
                a = Augmentation(a.w, np.asarray(wc)[sl] / a.w[:, None])
            curves.append(c)
            augs.append(a)
        return CotangentPoint(tuple(curves), tuple(augs))

    def shifted(self, xi: "PhaseTangent", h: float) -> "CotangentPoint":
        return self.moved(self.nodes + h * xi.dphi, self.wc + h * xi.dwc)


@dataclass(frozen=True, eq=False)
class PhaseTangent:
    dphi: np.ndarray
    dwc: np.ndarray

    def __post_init__(self):
        dphi = np.asarray(self.dphi, dtype=float)
        dwc = np.asarray(self.dwc, dtype=float)
        if dphi.shape != dwc.shape or dphi.ndim != 2 or dphi.shape[1] != 2:
            raise ShapeError("tangent components must both have shape (M, 2)")
        object.__setattr__(self, "dphi", dphi)
        object.__setattr__(self, "dwc", dwc)

    @classmethod
    def zeros(cls, m):
        return cls(np.zeros((m, 2)), np.zeros((m, 2)))

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float)
        m = v.shape[0] // 4
        return cls(v[:2 * m].reshape(m, 2), v[2 * m:].reshape(m, 2))

    def as_vector(self):
        return np.concatenate([self.dphi.ravel(), self.dwc.ravel()])

    def __add__(self, other):
        return PhaseTangent(self.dphi + other.dphi, self.dwc + other.dwc)

    def __mul__(self, a):
        return PhaseTangent(a * self.dphi, a * self.dwc)

    __rmul__ = __mul__


def _check(p: CotangentPoint, *xis):
    for xi in xis:
        if xi.dphi.shape != (p.size, 2):
            raise ShapeError(f"tangent has {xi.dphi.shape[0]} nodes, point has {p.size}")


def theta_eval(p: CotangentPoint, xi: PhaseTangent) -> float:
    """Tautological 1-form ``int_S alpha(d phi)``."""
    _check(p, xi)
    return float(np.sum(p.weights * np.einsum("ij,ij->i", p.wc, xi.dphi)))


def omega_eval(p: CotangentPoint, xi1: PhaseTangent, xi2: PhaseTangent) -> float:
    """Canonical 2-form in the flat per-node coordinates."""
    _check(p, xi1, xi2)
    a = np.einsum("ij,ij->i", xi2.dwc, xi1.dphi)
    b = np.einsum("ij,ij->i", xi1.dwc, xi2.dphi)
    return float(np.sum(p.weights * (a - b)))


def omega_matrix(p: CotangentPoint) -> np.ndarray:
    """Matrix ``W`` with ``omega(x1, x2) = x1.as_vector() @ W @ x2.as_vector()``."""
    m = p.size
    wt = np.repeat(p.weights, 2)
    W = np.zeros((4 * m, 4 * m))
    idx = np.arange(2 * m)
    W[idx, 2 * m + idx] = wt
    W[2 * m + idx, idx] = -wt
    return W


def _per_component(Y, p: CotangentPoint):
    if callable(Y):
        return np.concatenate([np.asarray(Y(c.s), dtype=float) * np.ones(c.n) for c in p.curves])
    if isinstance(Y, (list, tuple)):
        return np.concatenate([np.asarray(y, dtype=float) for y in Y])
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 0:
        return np.full(p.size, float(Y))
    if Y.shape[0] != p.size:
        raise ShapeError("reparametrisation field has the wrong length")
    return Y


def lift_reparam(Y: Union[Callable, np.ndarray, Sequence], p: CotangentPoint) -> PhaseTangent:
    """Infinitesimal right action of the vector field ``Y d/ds``.

    ``d phi = phi' Y`` and ``d P = (Y P)'`` (Lie derivative of a density).
    """
    y = _per_component(Y, p)
    dphi = p.velocity() * y[:, None]
    dwc = p.diff(y[:, None] * p.wc)
    return PhaseTangent(dphi, dwc)


def lift_ambient(X: VectorField, p: CotangentPoint) -> PhaseTangent:
    """Cotangent lift of an ambient field: ``d phi = X(phi)``, ``d P = -DX^T P``."""
    x = p.nodes
    J = X.jacobian(x)
    return PhaseTangent(X.value(x), -np.einsum("nji,nj->ni", J, p.wc))


def reparametrize(p: CotangentPoint, psi: Reparametrization) -> CotangentPoint:
    """Right action ``(phi o psi, psi^* alpha)`` on every component."""
    curves = tuple(compose_curve(c, psi) for c in p.curves)
    augs = tuple(pullback_augmentation(a, psi, c.n) for a, c in zip(p.augs, p.curves))
    return CotangentPoint(curves, augs)


def transport_tangent(p: CotangentPoint, xi: PhaseTangent, psi: Reparametrization) -> PhaseTangent:
    """Push a tangent vector along the reparametrisation ``psi``."""
    out_phi, out_wc = [], []
    for sl, c in zip(p.slices(), p.curves):
        s = psi.psi(c.s)
        out_phi.append(_periodic.trig_interp(xi.dphi[sl], s))
        out_wc.append(_periodic.trig_interp(xi.dwc[sl], s) * psi.dpsi(c.s)[:, None])
    return PhaseTangent(np.vstack(out_phi), np.vstack(out_wc))


def _rk4(rhs, state, t, dt):
    steps = max(1, int(round(abs(t) / dt)))
    h = t / steps
    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k1)))
        k3 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k2)))
        k4 = rhs(tuple(s + h * k for s, k in zip(state, k3)))
        state = tuple(s + h / 6.0 * (a + 2 * b + 2 * c + d) for s, a, b, c, d in zip(state, k1, k2, k3, k4))
    return state


def flow_ambient(p: CotangentPoint, X: VectorField, t: float, dt: float = 1e-3) -> CotangentPoint:
    """Push ``p`` by the time-``t`` flow of ``X``; covectors move by the inverse transpose.

    Integrated with RK4 on ``x' = X(x)``, ``P' = -DX(x)^T P``.
    """
    def rhs(state):
        x, P = state
        return X.value(x), -np.einsum("nji,nj->ni", X.jacobian(x), P)

    x, P = _rk4(rhs, (p.nodes, p.wc), t, dt)
    return p.moved(x, P)


# ---------------------------------------------------------------------------
# quotient by the conormal sections


def generator_periods(p_or_curves) -> np.ndarray:
    """``(int_{C_j} dx, int_{C_j} dy)`` per component, shape (k, 2).

    These are the pullbacks of the compactly supported degree-1 classes; they
    vanish in the plane and for null-homotopic torus curves.
    """
    curves = p_or_curves.curves if isinstance(p_or_curves, CotangentPoint) else p_or_curves
    rows = [np.asarray(c.period) if c.ambient.is_torus else np.zeros(2) for c in curves]
    return np.array(rows)


def allowed_constants(curves, kind: str) -> np.ndarray:
    """Basis (k, m) of per-component constants that are quotiented out.

    isodrastic: all of ``R^k``.  isovolume: constants ``f`` with
    ``sum_j f_j int_{C_j} beta = 0`` for both torus generators ``beta``.
    """
    k = len(curves)
    if kind == "isodrastic":
        return np.eye(k)
    if kind == "isovolume":
        G = generator_periods(curves)
        if not np.any(G):
            return np.eye(k)
        return null_space(G.T)
    raise ValueError(f"unknown leaf kind {kind!r}")


def epsilon_stack(p: CotangentPoint) -> np.ndarray:
    """Columns ``eps_{C_j}`` as concatenated weighted covectors, shape (M, 2, k)."""
    E = np.zeros((p.size, 2, p.k))
    for j, (sl, c) in enumerate(zip(p.slices(), p.curves)):
        E[sl, :, j] = epsilon_section(c).wc
    return E


@dataclass(frozen=True, eq=False)
class QuotientClass:
    """``[alpha]`` modulo the allowed multiples of the conormal sections."""

    point: CotangentPoint
    kind: Optional[str]


def quotient_project(q: QuotientClass) -> CotangentPoint:
    """Representative with zero discrete L^2 pairing against every allowed ``eps_C`` combination."""
    if q.kind is None:
        raise ValueError("leaf kind missing")
    p = q.point
    F = allowed_constants(p.curves, q.kind)
    P = project_out(p, p.wc, F)
    return p.moved(wc=P)


def project_out(p: CotangentPoint, wc, F=None) -> np.ndarray:
    """Remove from ``wc`` (M, 2) its L^2 projection on span ``{sum_j F[j, a] eps_j}``."""
    E = epsilon_stack(p)
    if F is None:
        F = np.eye(p.k)
    if F.shape[1] == 0:
        return np.array(wc, dtype=float)
    B = np.einsum("mij,ja->mia", E, F).reshape(2 * p.size, -1)
    w = np.repeat(p.weights, 2)
    G = B.T @ (w[:, None] * B)
    coef = np.linalg.solve(G, B.T @ (w * np.asarray(wc, dtype=float).ravel()))
    return (np.asarray(wc, dtype=float).ravel() - B @ coef).reshape(-1, 2)


def moment_right_density(p: CotangentPoint) -> OneFormDensity:
    return OneFormDensity(tuple(pullback_density(c, a) for c, a in zip(p.curves, p.augs)))


def conormal_point(curves, scale=1.0) -> CotangentPoint:
    """Point whose augmentation is ``scale * eps_C`` on each curve."""
    curves = tuple(curves)
    return CotangentPoint(curves, tuple(epsilon_section(c).scaled(scale) for c in curves))


def normal_covector_point(curve: DiscreteCurve, outward=True) -> CotangentPoint:
    """Unit outward (or inward) conormal with weight ``|phi'|``."""
    v = curve.velocity()
    speed = np.hypot(v[:, 0], v[:, 1])
    orient = np.sign(enclosed_area(curve)) if curve.contractible else 1.0
    n_out = orient * np.column_stack([v[:, 1], -v[:, 0]]) / speed[:, None]
    if not outward:
        n_out = -n_out
    return CotangentPoint.of(curve, Augmentation(speed, n_out))


__all__ = [
    "CotangentPoint", "PhaseTangent", "QuotientClass", "theta_eval", "omega_eval", "omega_matrix",
    "lift_reparam", "lift_ambient", "reparametrize", "transport_tangent", "flow_ambient",
    "quotient_project", "project_out", "allowed_constants", "generator_periods", "epsilon_stack",
    "moment_right_density", "conormal_point", "normal_covector_point", "rotate_to_covector",
]
