"""Vortex dipole loops ``(C, [u])`` and their Hamiltonian evolution.

A dipole loop is a closed plane curve with a nowhere-tangent vector field
``u`` along it.  The induced density ``nu_C = iota^* i_u mu`` has scalar
``r = u_x y' - u_y x'``; ``u`` is only defined modulo multiples of
``t_C = phi' / r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _periodic
from .densities import Augmentation, covector_to_vector, rotate_to_covector, volume_form
from .fields import HamiltonianSpec, hamiltonian_field
from .geometry import DiscreteCurve, enclosed_area, quadrature_area
from .moments import TangencyError, dipole_density, moment_dipole

ABORT_RTOL = 1e-8


class NotInOpenSetError(ValueError):
    pass


def _tangency_check(curve, u, r, rtol=ABORT_RTOL):
    v = curve.velocity()
    bound = rtol * np.max(np.hypot(u[:, 0], u[:, 1])) * np.max(np.hypot(v[:, 0], v[:, 1]))
    bad = np.nonzero(np.abs(r) < bound)[0]
    return int(bad[0]) if bad.size else None


class DipoleLoop:
    """Curve with a transverse vector field ``u`` (shape (N, 2))."""

    def __init__(self, curve: DiscreteCurve, u, validate=True):
        u = np.array(u, dtype=float)
        if u.shape != (curve.n, 2):
            raise ValueError(f"u has shape {u.shape}, expected ({curve.n}, 2)")
        u.setflags(write=False)
        self.curve = curve
        self.u = u
        self.r = dipole_density(curve, u)
        if validate:
            if curve.ambient.is_torus:
                raise ValueError("dipole loops are supported in the plane only")
            bad = _tangency_check(curve, u, self.r)
            if bad is not None:
                raise TangencyError(f"tangency violation at node {bad}")

    @property
    def area(self) -> float:
        """Enclosed area ``a`` (unsigned, spectral quadrature)."""
        return abs(quadrature_area(self.curve))

    @property
    def length(self) -> float:
        """``l = int sqrt|r| ds``, the length of the induced density."""
        return float(_periodic.trapz(np.sqrt(np.abs(self.r))))

    @property
    def t_c(self) -> np.ndarray:
        """Dual field of ``nu_C``: ``u`` is defined modulo multiples of it."""
        return self.curve.velocity() / self.r[:, None]

    def shifted_class(self, c) -> "DipoleLoop":
        """Representative ``u + c t_C`` of the same class."""
        return DipoleLoop(self.curve, self.u + np.asarray(c, dtype=float).reshape(-1, 1) * self.t_c)


def gamma_from_u(curve: DiscreteCurve, u) -> Augmentation:
    """``gamma = |nu_C| (x) i_u mu`` with ``nu_C = iota^* i_u mu``."""
    u = np.asarray(u, dtype=float)
    r = dipole_density(curve, u)
    return Augmentation(np.abs(r), rotate_to_covector(u))


def u_from_gamma(curve: DiscreteCurve, gamma: Augmentation) -> DipoleLoop:
    """Invert :func:`gamma_from_u`.

    ``iota^* gamma = |v| v ds`` fixes ``v``; then ``i_u mu = gamma / |v|``.
    """
    if gamma.n != curve.n:
        raise ValueError(f"augmentation has {gamma.n} nodes, curve has {curve.n}")
    wc = gamma.wc
    v = curve.velocity()
    R = np.einsum("ij,ij->i", wc, v)
    bound = ABORT_RTOL * np.max(np.hypot(wc[:, 0], wc[:, 1])) * np.max(np.hypot(v[:, 0], v[:, 1]))
    zero = np.nonzero(np.abs(R) <= bound)[0]
    if zero.size:
        raise NotInOpenSetError(f"not in the open set: pullback vanishes at node {int(zero[0])}")
    nu = volume_form(R)
    return DipoleLoop(curve, covector_to_vector(wc / np.abs(nu)[:, None]))


def side_classify(d: DipoleLoop) -> str:
    """``"outward"`` or ``"inward"``: the side of the curve that ``u`` points to."""
    curve = d.curve
    v = curve.velocity()
    orient = np.sign(enclosed_area(curve))
    n_out = orient * np.column_stack([v[:, 1], -v[:, 0]])
    sgn = np.sign(np.einsum("ij,ij->i", d.u, n_out))
    if np.all(sgn > 0):
        return "outward"
    if np.all(sgn < 0):
        return "inward"
    bad = int(np.nonzero(sgn != sgn[0])[0][0])
    raise TangencyError(f"normal component of u changes sign at node {bad}: data violates transversality")


# ---------------------------------------------------------------------------
# evolution


@dataclass
class TrajectoryRecord:
    times: list = field(default_factory=list)
    curves: list = field(default_factory=list)
    us: list = field(default_factory=list)
    area: list = field(default_factory=list)
    length: list = field(default_factory=list)
    moment: list = field(default_factory=list)
    hamiltonian: Optional[HamiltonianSpec] = None
    aborted: Optional[str] = None

    def append(self, t, d: DipoleLoop, m):
        if self.times and not t > self.times[-1]:
            raise ValueError("trajectory times must increase")
        if self.curves and d.curve.n != self.curves[0].n:
            raise ValueError("node count changed along the trajectory")
        self.times.append(float(t))
        self.curves.append(d.curve)
        self.us.append(d.u)
        self.area.append(d.area)
        self.length.append(d.length)
        self.moment.append(m)

    def __len__(self):
        return len(self.times)

    def loop(self, i) -> DipoleLoop:
        return DipoleLoop(self.curves[i], self.us[i], validate=False)


def evolve(d: DipoleLoop, h: HamiltonianSpec, T: float, dt: float, sample_every: Optional[int] = None) -> TrajectoryRecord:
    """RK4 on ``phi' = X_h(phi)``, ``u' = DX_h(phi) u``.

    ``X_h`` is divergence-free, so the tangent map moves ``u`` exactly as the
    pushforward action does and no density correction appears.  Raises
    :class:`TangencyError` (with the partial record attached as ``.record``)
    when ``min|r|`` falls below ``1e-8 max|u| max|phi'|``.
    """
    if not (0 < dt <= T):
        raise ValueError("need 0 < dt <= T")
    X = hamiltonian_field(h)
    steps = int(round(T / dt))
    step = T / steps
    every = sample_every or max(1, math.ceil(T / (100 * dt)))

    def rhs(x, u):
        return X.value(x), np.einsum("nij,nj->ni", X.jacobian(x), u)

    rec = TrajectoryRecord(hamiltonian=h)
    rec.append(0.0, d, moment_dipole(d, h))
    x, u = np.array(d.curve.nodes), np.array(d.u)
    curve = d.curve
    for n in range(1, steps + 1):
        k1 = rhs(x, u)
        k2 = rhs(x + 0.5 * step * k1[0], u + 0.5 * step * k1[1])
        k3 = rhs(x + 0.5 * step * k2[0], u + 0.5 * step * k2[1])
        k4 = rhs(x + step * k3[0], u + step * k3[1])
        x = x + step / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        u = u + step / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        cur = DipoleLoop(curve.with_nodes(x), u, validate=False)
        bad = _tangency_check(cur.curve, cur.u, cur.r)
        if bad is not None:
            rec.aborted = f"tangency at node {bad}, t={n * step:.6g}"
            err = TangencyError(f"tangency violation at node {bad} (t={n * step:.6g})")
            err.record = rec
            raise err
        if n % every == 0 or n == steps:
            rec.append(n * step, cur, moment_dipole(cur, h))
    return rec


@dataclass(frozen=True)
class DriftSummary:
    area: float
    length: float
    moment: float

    def max(self):
        return max(self.area, self.length, self.moment)


def invariant_report(tr: TrajectoryRecord) -> DriftSummary:
    """Max absolute drift of ``a``, ``l`` and ``<J, X_h>`` relative to ``t = 0``."""
    if not len(tr):
        raise ValueError("empty trajectory")
    drift = lambda v: float(np.max(np.abs(np.asarray(v) - v[0])))
    return DriftSummary(drift(tr.area), drift(tr.length), drift(tr.moment))
