"""Finite-dimensional probes of the two moment maps as a dual pair.

Everything here works with sampled generator directions at one base point:
reparametrisation lifts ``W_R``, Hamiltonian lifts ``W_L`` and a reference
span of general ambient lifts.  Subspace geometry uses the Euclidean metric
on the flat ``4 M`` coordinates; the symplectic form only enters the
orthogonality condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import null_space, orth

from .fields import (HamiltonianSpec, RadialCutoff, gaussian, gaussian_affine_field, grid_gaussians,
                     hamiltonian_field, periodic_field, rotation_hamiltonian)
from .leaves import isodrast_flux, numerical_rank, quotient_by_periods
from .moments import moment_left
from .phase import (CotangentPoint, PhaseTangent, allowed_constants, lift_ambient, lift_reparam,
                    omega_eval, omega_matrix, project_out, theta_eval)
from . import _periodic

FD_STEPS = (1e-3, 5e-4, 2.5e-4)
FD_FLOOR = 1e-11


class BatteryError(ValueError):
    pass


def fourier_modes(J: int, n: int) -> list:
    s = np.arange(n) / n
    modes = [np.ones(n)]
    for j in range(1, J + 1):
        modes.append(np.sin(2 * np.pi * j * s))
        modes.append(np.cos(2 * np.pi * j * s))
    return modes


def _pairing_right(p: CotangentPoint, Y) -> float:
    """``<J_R(p), Y> = int Y (w c . phi') ds``."""
    r = np.einsum("ij,ij->i", p.wc, p.velocity())
    return float(np.sum(p.weights * Y * r))


@dataclass(eq=False)
class DirectionBattery:
    """Generators and their lifts at a base point.

    ``right`` holds concatenated per-node ``Y`` arrays (one Fourier mode on one
    component, zero elsewhere); ``left`` holds Hamiltonian specs.  ``ZR`` and
    ``ZL`` stack the lifted tangent vectors as columns of length ``4 M``.
    """

    point: CotangentPoint
    right: list
    left: list
    ZR: np.ndarray = field(init=False)
    ZL: np.ndarray = field(init=False)

    def __post_init__(self):
        p = self.point
        self.ZR = np.column_stack([lift_reparam(Y, p).as_vector() for Y in self.right]) if self.right \
            else np.zeros((4 * p.size, 0))
        self.ZL = np.column_stack([lift_ambient(h.field, p).as_vector() for h in self.left]) if self.left \
            else np.zeros((4 * p.size, 0))

    def generators(self):
        """``(kind, generator, lifted tangent, <J, generator>)`` for every column."""
        p = self.point
        for Y, col in zip(self.right, self.ZR.T):
            yield "right", Y, PhaseTangent.from_vector(col), lambda q, Y=Y: _pairing_right(q, Y)
        for h, col in zip(self.left, self.ZL.T):
            X = h.field
            yield "left", h, PhaseTangent.from_vector(col), lambda q, X=X: moment_left(q, X)


def scene_box(p: CotangentPoint, pad=0.5):
    nodes = p.nodes
    lo, hi = nodes.min(axis=0), nodes.max(axis=0)
    diam = float(np.max(hi - lo))
    return lo - pad * diam / 2, hi + pad * diam / 2, diam


def build_battery(p: CotangentPoint, J: int = 8, grid=(5, 5), sigma: Optional[float] = None,
                  extras: bool = True, box=None) -> DirectionBattery:
    """Fourier modes ``1, sin, cos (j <= J)`` per component and Gaussian bumps on a grid.

    ``sigma`` defaults to a quarter of the scene diameter.  ``extras`` adds
    cut-off translations and the rotation about the box centre.
    """
    right = []
    for sl, c in zip(p.slices(), p.curves):
        for y in fourier_modes(J, c.n):
            Y = np.zeros(p.size)
            Y[sl] = y
            right.append(Y)
    lo, hi, diam = scene_box(p) if box is None else (np.asarray(box[0]), np.asarray(box[1]),
                                                     float(np.max(np.asarray(box[1]) - np.asarray(box[0]))))
    sigma = diam / 4.0 if sigma is None else sigma
    left = grid_gaussians(lo, hi, grid, sigma)
    if extras:
        centre = tuple(0.5 * (lo + hi))
        R = float(np.max(hi - lo))
        cut = RadialCutoff(centre, R, 2 * R)
        for g in ((1.0, 0.0), (0.0, 1.0)):
            left.append(HamiltonianSpec("linear", centre, gradient=g, cutoff=cut))
        left.append(rotation_hamiltonian(centre, (R, 2 * R)))
    bat = DirectionBattery(p, right, left)
    if numerical_rank(bat.ZR) < bat.ZR.shape[1]:
        raise BatteryError("battery rank-deficient: reparametrisation lifts are dependent")
    return bat


# ---------------------------------------------------------------------------
# Hamiltonian property


@dataclass(frozen=True)
class HamiltonianCheck:
    theta_residual: float
    fd_steps: tuple
    fd_residuals: tuple
    ratios: tuple

    @property
    def max_residual(self) -> float:
        return max(self.theta_residual, max(self.fd_residuals))


def _random_tangent(p: CotangentPoint, rng) -> PhaseTangent:
    """Smooth random tangent vector: a few low Fourier modes per coordinate."""
    cols = []
    for c in p.curves:
        s = c.s
        block = np.zeros((c.n, 4))
        for j in range(4):
            block[:, j] = sum(rng.normal() * np.cos(2 * np.pi * m * s + rng.uniform(0, 2 * np.pi)) / (1 + m)
                              for m in range(4))
        cols.append(block)
    b = np.vstack(cols)
    return PhaseTangent(b[:, :2], b[:, 2:])


def hamiltonian_property_check(p: CotangentPoint, battery: DirectionBattery, steps=FD_STEPS,
                               n_random: int = 3, seed: int = 0) -> HamiltonianCheck:
    """Residuals of ``theta(zeta) = <J, g>`` and ``d<J, g>(xi) = omega(zeta, xi)``.

    The differential is a central difference with each step in ``steps``.
    ``ratios`` compares consecutive steps over generators whose residual at
    the largest step is above roundoff (central differences are exact for
    the bilinear right pairing).
    """
    rng = np.random.default_rng(seed)
    xis = [_random_tangent(p, rng) for _ in range(n_random)]
    theta_res = 0.0
    fd = np.zeros((len(steps),))
    ratio_rows = []
    for kind, gen, zeta, pairing in battery.generators():
        theta_res = max(theta_res, abs(theta_eval(p, zeta) - pairing(p)))
        for xi in xis:
            target = omega_eval(p, zeta, xi)
            row = []
            for i, h in enumerate(steps):
                approx = (pairing(p.shifted(xi, h)) - pairing(p.shifted(xi, -h))) / (2 * h)
                row.append(abs(approx - target))
            fd = np.maximum(fd, row)
            if row[0] > FD_FLOOR * max(1.0, abs(target)):
                ratio_rows.append(row)
    if ratio_rows:
        R = np.array(ratio_rows)
        ratios = tuple(float(np.min(R[:, i] / R[:, i + 1])) for i in range(len(steps) - 1))
    else:
        ratios = ()
    return HamiltonianCheck(theta_res, tuple(steps), tuple(float(v) for v in fd), ratios)


# ---------------------------------------------------------------------------
# symplectic complement


def reference_fields(p: CotangentPoint, grid=(7, 7), sigma=None, box=None):
    """General (not volume-preserving) ambient fields spanning the comparison space."""
    amb = p.curves[0].ambient
    if amb.is_torus:
        out = []
        for mx in range(-2, 3):
            for my in range(-3, 4):
                for vec in ((1.0, 0.0), (0.0, 1.0)):
                    for ph in (0.0, np.pi / 2):
                        if mx == 0 and my == 0 and ph:
                            continue
                        out.append(periodic_field(mx, my, vec, ph, amb.moduli))
        return out
    lo, hi, diam = scene_box(p) if box is None else (np.asarray(box[0]), np.asarray(box[1]),
                                                     float(np.max(np.asarray(box[1]) - np.asarray(box[0]))))
    sigma = diam / 4.0 if sigma is None else sigma
    out = []
    basis = [np.array([[1.0, 0], [0, 0]]), np.array([[0, 1.0], [0, 0]]),
             np.array([[0, 0], [1.0, 0]]), np.array([[0, 0], [0, 1.0]])]
    for x in np.linspace(lo[0], hi[0], grid[0]):
        for y in np.linspace(lo[1], hi[1], grid[1]):
            for A in basis:
                out.append(gaussian_affine_field(A, (0.0, 0.0), (x, y), sigma))
            for b in ((1.0, 0.0), (0.0, 1.0)):
                out.append(gaussian_affine_field(np.zeros((2, 2)), b, (x, y), sigma))
    return out


def leaf_projector(p: CotangentPoint, kind: str):
    """Map on flat tangent vectors removing allowed conormal multiples from ``dP``."""
    F = allowed_constants(p.curves, kind)
    m = p.size

    def apply(Z):
        Z = np.array(Z, dtype=float)
        for j in range(Z.shape[1]):
            dwc = Z[2 * m:, j].reshape(m, 2)
            Z[2 * m:, j] = project_out(p, dwc, F).ravel()
        return Z

    return apply


def flux_rows(p: CotangentPoint, Z, kind: str) -> np.ndarray:
    """Flux of the ``dphi`` part of each column, modulo generator periods for isovolume."""
    m = p.size
    A = np.column_stack([isodrast_flux(p.curves, Z[:2 * m, j].reshape(m, 2)) for j in range(Z.shape[1])])
    if kind == "isovolume":
        A = quotient_by_periods(A, p.curves)
    return A


def principal_angles(A, B) -> np.ndarray:
    """Angles of the directions of span ``A`` to span ``B`` (ascending), length ``dim A``."""
    QA, QB = orth(A), orth(B)
    if QA.shape[1] == 0:
        return np.zeros(0)
    if QB.shape[1] == 0:
        return np.full(QA.shape[1], np.pi / 2)
    s = np.linalg.svd(QB.T @ QA, compute_uv=False)
    s = np.concatenate([s, np.zeros(max(0, QA.shape[1] - s.size))])
    return np.sort(np.arccos(np.clip(s, 0.0, 1.0)))


@dataclass(frozen=True)
class ComplementReport:
    angles: np.ndarray
    omega_dim: int
    left_dim: int
    flux_rank: int
    expected_codim: int
    bracket_residual: float

    @property
    def mean_angle(self) -> float:
        return float(np.mean(self.angles)) if self.angles.size else 0.0

    @property
    def codim_ok(self) -> bool:
        return self.flux_rank == self.expected_codim


def expected_codimension(curves, kind: str) -> int:
    k = len(curves)
    if kind == "isodrastic":
        return k
    G = np.array([c.period if c.ambient.is_torus else (0.0, 0.0) for c in curves])
    return k - int(np.linalg.matrix_rank(G)) if np.any(G) else k


def bracket_residual(p: CotangentPoint, J: int = 4) -> float:
    """``max |omega(zeta_Y, zeta_Z) - <J_R, [Y, Z]>|`` over Fourier modes; bracket taken spectrally."""
    res = 0.0
    c0, sl = p.curves[0], p.slices()[0]
    modes = fourier_modes(J, c0.n)
    pad = lambda y: np.concatenate([y if i == 0 else np.zeros(c.n) for i, c in enumerate(p.curves)])
    lifts = [lift_reparam(pad(y), p) for y in modes]
    for a in range(len(modes)):
        for b in range(a + 1, len(modes)):
            Y, Z = modes[a], modes[b]
            br = Y * _periodic.diff(Z, "spectral") - Z * _periodic.diff(Y, "spectral")
            res = max(res, abs(omega_eval(p, lifts[a], lifts[b]) - _pairing_right(p, pad(br))))
    return res


def complement_residual(p: CotangentPoint, battery: DirectionBattery, kind: str = "isodrastic",
                        reference=None) -> ComplementReport:
    """Compare ``W_L`` with the ``omega``-orthogonal of ``W_R`` inside the leaf model.

    The leaf model is the span of reference ambient lifts plus ``W_R``,
    restricted to zero flux, with ``dP`` taken modulo the allowed conormal
    sections.  Angles are those of the orthogonal space's directions to
    ``W_L``; enriching ``W_L`` by nested grids can only shrink them.
    """
    if kind == "isodrastic":
        r = np.abs(np.einsum("ij,ij->i", p.wc, p.velocity()))
        if np.min(r) <= 1e-12 * np.max(r):
            raise ValueError("base point outside the open set: pullback density vanishes")
    if battery.ZL.shape[1] == 0 or battery.ZR.shape[1] == 0:
        raise BatteryError("battery rank-deficient: empty generator set")
    proj = leaf_projector(p, kind)
    ref = reference_fields(p) if reference is None else reference
    S = np.column_stack([lift_ambient(X, p).as_vector() for X in ref] + [battery.ZR])
    flux = flux_rows(p, S, kind)
    frank = numerical_rank(flux)
    K = null_space(flux) if flux.size else np.eye(S.shape[1])
    B = orth(proj(S @ K))
    ZR = proj(battery.ZR)
    W = omega_matrix(p)
    C = null_space(ZR.T @ W @ B, rcond=1e-10)
    Omega = B @ C
    ZL = proj(battery.ZL)
    angles = principal_angles(Omega, ZL)
    return ComplementReport(angles, Omega.shape[1], numerical_rank(ZL), frank,
                            expected_codimension(p.curves, kind), bracket_residual(p))


def enrichment_curve(p: CotangentPoint, grids=((3, 3), (5, 5), (9, 9)), kind="isodrastic", J=8):
    """Mean principal angle for nested Gaussian grids over one fixed box."""
    lo, hi, diam = scene_box(p)
    ref = reference_fields(p)
    out = []
    for g in grids:
        bat = build_battery(p, J=J, grid=g, sigma=diam / 4.0, extras=False, box=(lo, hi))
        out.append(complement_residual(p, bat, kind, reference=ref))
    return out
