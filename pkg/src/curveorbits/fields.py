"""Closed-form Hamiltonians and ambient vector fields with analytic Jacobians.

Sign convention: with ``mu = dx ^ dy`` the Hamiltonian vector field is
``X_h = (dh/dy, -dh/dx)``, which is the field with ``i_{X_h} mu = dh``.
Fluid-dynamics texts often use the opposite sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


def _bump(t):
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def _bump_d1(t):
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    out[pos] = np.exp(-1.0 / tp) / tp ** 2
    return out


def _bump_d2(t):
    out = np.zeros_like(t)
    pos = t > 0
    tp = t[pos]
    out[pos] = np.exp(-1.0 / tp) * (1.0 / tp ** 4 - 2.0 / tp ** 3)
    return out


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, with first two derivatives."""
    t = np.asarray(t, dtype=float)
    f, g = _bump(t), _bump(1.0 - t)
    f1, g1 = _bump_d1(t), -_bump_d1(1.0 - t)
    f2, g2 = _bump_d2(t), _bump_d2(1.0 - t)
    d = f + g
    d1 = f1 + g1
    num = f1 * g - f * g1
    num1 = f2 * g - f * g2
    return f / d, num / d ** 2, num1 / d ** 2 - 2.0 * num * d1 / d ** 3


@dataclass(frozen=True)
class RadialCutoff:
    """``chi(|x - center|)``: 1 inside ``r0``, 0 beyond ``r1``, smooth between."""

    center: tuple
    r0: float
    r1: float

    def __post_init__(self):
        if not (0 <= self.r0 < self.r1):
            raise ValueError("cutoff radii need 0 <= r0 < r1")

    def evaluate(self, pts):
        """Value, gradient (M, 2) and Hessian (M, 2, 2)."""
        d = np.asarray(pts, dtype=float) - np.asarray(self.center, dtype=float)
        rad = np.hypot(d[:, 0], d[:, 1])
        width = self.r1 - self.r0
        s, s1, s2 = smooth_step((rad - self.r0) / width)
        chi = 1.0 - s
        c1 = -s1 / width
        c2 = -s2 / width ** 2
        safe = np.where(rad > 0, rad, 1.0)
        rhat = d / safe[:, None]
        grad = c1[:, None] * rhat
        outer = rhat[:, :, None] * rhat[:, None, :]
        eye = np.eye(2)[None]
        hess = c2[:, None, None] * outer + (c1 / safe)[:, None, None] * (eye - outer)
        return chi, grad, hess


@dataclass(frozen=True)
class HamiltonianSpec:
    """Hamiltonian from a closed-form family, optionally multiplied by a cutoff.

    kinds
        ``gaussian``: ``amp * exp(-|x-c|^2 / (2 sigma^2))``
        ``polynomial``: ``sum coeffs[(i, j)] * dx^i * dy^j`` with ``d = x - c``
        ``linear``: ``<gradient, x - c>``
    """

    kind: str
    center: tuple = (0.0, 0.0)
    amp: float = 1.0
    sigma: float = 1.0
    coeffs: dict = field(default_factory=dict)
    gradient: tuple = (0.0, 0.0)
    cutoff: Optional[RadialCutoff] = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "polynomial", "linear", "zero"):
            raise ValueError(f"unknown Hamiltonian family {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError("gaussian sigma must be positive")

    def _base(self, pts):
        d = np.asarray(pts, dtype=float) - np.asarray(self.center, dtype=float)
        m = d.shape[0]
        if self.kind == "zero":
            return np.zeros(m), np.zeros((m, 2)), np.zeros((m, 2, 2))
        if self.kind == "gaussian":
            s2 = self.sigma ** 2
            g = self.amp * np.exp(-0.5 * np.sum(d * d, axis=1) / s2)
            grad = -g[:, None] * d / s2
            hess = g[:, None, None] * (d[:, :, None] * d[:, None, :] / s2 ** 2 - np.eye(2)[None] / s2)
            return g, grad, hess
        if self.kind == "linear":
            gvec = np.asarray(self.gradient, dtype=float)
            return d @ gvec, np.tile(gvec, (m, 1)), np.zeros((m, 2, 2))
        h = np.zeros(m)
        grad = np.zeros((m, 2))
        hess = np.zeros((m, 2, 2))
        x, y = d[:, 0], d[:, 1]
        for (i, j), a in self.coeffs.items():
            h += a * x ** i * y ** j
            if i >= 1:
                grad[:, 0] += a * i * x ** (i - 1) * y ** j
            if j >= 1:
                grad[:, 1] += a * j * x ** i * y ** (j - 1)
            if i >= 2:
                hess[:, 0, 0] += a * i * (i - 1) * x ** (i - 2) * y ** j
            if j >= 2:
                hess[:, 1, 1] += a * j * (j - 1) * x ** i * y ** (j - 2)
            if i >= 1 and j >= 1:
                mixed = a * i * j * x ** (i - 1) * y ** (j - 1)
                hess[:, 0, 1] += mixed
                hess[:, 1, 0] += mixed
        return h, grad, hess

    def evaluate(self, pts):
        """``(h, grad h, Hess h)`` at points of shape (M, 2)."""
        h, g, H = self._base(np.atleast_2d(pts))
        if self.cutoff is None:
            return h, g, H
        chi, cg, cH = self.cutoff.evaluate(np.atleast_2d(pts))
        hh = h * chi
        gg = g * chi[:, None] + h[:, None] * cg
        HH = (H * chi[:, None, None] + g[:, :, None] * cg[:, None, :]
              + cg[:, :, None] * g[:, None, :] + h[:, None, None] * cH)
        return hh, gg, HH

    def h(self, pts):
        return self.evaluate(pts)[0]

    def grad(self, pts):
        return self.evaluate(pts)[1]

    def hessian(self, pts):
        return self.evaluate(pts)[2]

    @property
    def field(self) -> "VectorField":
        return hamiltonian_field(self)

    def to_dict(self):
        d = {"type": self.kind, "center": list(self.center)}
        if self.kind == "gaussian":
            d.update(amp=self.amp, sigma=self.sigma)
        elif self.kind == "polynomial":
            d["coeffs"] = [[i, j, a] for (i, j), a in sorted(self.coeffs.items())]
        elif self.kind == "linear":
            d["gradient"] = list(self.gradient)
        if self.cutoff is not None:
            d["cutoff"] = [self.cutoff.r0, self.cutoff.r1]
        return d

    @classmethod
    def from_dict(cls, d):
        center = tuple(float(v) for v in d.get("center", (0.0, 0.0)))
        cut = d.get("cutoff")
        cutoff = RadialCutoff(center, float(cut[0]), float(cut[1])) if cut is not None else None
        kind = d["type"]
        if kind == "polynomial":
            coeffs = {(int(i), int(j)): float(a) for i, j, a in d.get("coeffs", [])}
            return cls(kind, center, coeffs=coeffs, cutoff=cutoff)
        if kind == "linear":
            return cls(kind, center, gradient=tuple(float(v) for v in d["gradient"]), cutoff=cutoff)
        if kind == "gaussian":
            return cls(kind, center, amp=float(d.get("amp", 1.0)), sigma=float(d["sigma"]), cutoff=cutoff)
        return cls(kind, center, cutoff=cutoff)


def gaussian(center, amp=1.0, sigma=1.0, cutoff=None) -> HamiltonianSpec:
    c = tuple(float(v) for v in center)
    cut = RadialCutoff(c, *cutoff) if cutoff is not None else None
    return HamiltonianSpec("gaussian", c, amp=amp, sigma=sigma, cutoff=cut)


def rotation_hamiltonian(center=(0.0, 0.0), cutoff=(3.0, 4.0)) -> HamiltonianSpec:
    """``h = |x - c|^2 / 2`` times a cutoff; rigid clockwise rotation on the plateau."""
    c = tuple(float(v) for v in center)
    cut = RadialCutoff(c, *cutoff) if cutoff is not None else None
    return HamiltonianSpec("polynomial", c, coeffs={(2, 0): 0.5, (0, 2): 0.5}, cutoff=cut)


ZERO_HAMILTONIAN = HamiltonianSpec("zero")


@dataclass(frozen=True)
class VectorField:
    """Ambient vector field given by vectorised value and Jacobian callables."""

    value: Callable
    jacobian: Callable
    name: str = ""

    def __call__(self, pts):
        return self.value(np.atleast_2d(pts))

    def __add__(self, other):
        return VectorField(lambda p: self.value(p) + other.value(p),
                           lambda p: self.jacobian(p) + other.jacobian(p),
                           f"{self.name}+{other.name}")

    def scaled(self, a):
        return VectorField(lambda p: a * self.value(p), lambda p: a * self.jacobian(p), self.name)


def hamiltonian_field(spec: HamiltonianSpec) -> VectorField:
    def value(p):
        g = spec.grad(p)
        return np.column_stack([g[:, 1], -g[:, 0]])

    def jac(p):
        H = spec.hessian(p)
        J = np.empty_like(H)
        J[:, 0, :] = H[:, 1, :]
        J[:, 1, :] = -H[:, 0, :]
        return J

    return VectorField(value, jac, f"X_h[{spec.kind}]")


def zero_field() -> VectorField:
    return VectorField(lambda p: np.zeros((p.shape[0], 2)), lambda p: np.zeros((p.shape[0], 2, 2)), "zero")


def constant_field(v) -> VectorField:
    v = np.asarray(v, dtype=float)
    return VectorField(lambda p: np.tile(v, (p.shape[0], 1)), lambda p: np.zeros((p.shape[0], 2, 2)), "const")


def affine_field(A, b=(0.0, 0.0), center=(0.0, 0.0), cutoff=None) -> VectorField:
    """``X = (A (x - c) + b) * chi``; ``chi`` an optional :class:`RadialCutoff` (r0, r1)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(center, dtype=float)
    cut = RadialCutoff(tuple(c), *cutoff) if cutoff is not None else None

    def parts(p):
        base = (p - c) @ A.T + b
        if cut is None:
            return base, np.tile(A, (p.shape[0], 1, 1))
        chi, cg, _ = cut.evaluate(p)
        return base * chi[:, None], A[None] * chi[:, None, None] + base[:, :, None] * cg[:, None, :]

    return VectorField(lambda p: parts(p)[0], lambda p: parts(p)[1], "affine")


def radial_field(center=(0.0, 0.0), cutoff=None) -> VectorField:
    return affine_field(np.eye(2), center=center, cutoff=cutoff)


def gaussian_affine_field(A, b, center, sigma) -> VectorField:
    """``X = exp(-|x-c|^2 / 2 sigma^2) * (A (x - c) + b)``; generally not divergence-free."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(center, dtype=float)

    def parts(p):
        d = p - c
        g = np.exp(-0.5 * np.sum(d * d, axis=1) / sigma ** 2)
        base = d @ A.T + b
        dg = -g[:, None] * d / sigma ** 2
        return base * g[:, None], A[None] * g[:, None, None] + base[:, :, None] * dg[:, None, :]

    return VectorField(lambda p: parts(p)[0], lambda p: parts(p)[1], "gauss-affine")


def periodic_field(mx, my, vec, phase=0.0, lengths=(1.0, 1.0)) -> VectorField:
    """Torus field ``vec * cos(2 pi (mx x / Lx + my y / Ly) + phase)``."""
    vec = np.asarray(vec, dtype=float)
    kx, ky = 2 * np.pi * mx / lengths[0], 2 * np.pi * my / lengths[1]

    def value(p):
        arg = kx * p[:, 0] + ky * p[:, 1] + phase
        return np.cos(arg)[:, None] * vec

    def jac(p):
        arg = kx * p[:, 0] + ky * p[:, 1] + phase
        sn = -np.sin(arg)
        return sn[:, None, None] * vec[None, :, None] * np.array([kx, ky])[None, None, :]

    return VectorField(value, jac, f"periodic({mx},{my})")


def grid_gaussians(lo, hi, shape=(5, 5), sigma=None, amp=1.0):
    """Gaussian-bump Hamiltonians centred on a regular grid over a box."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if sigma is None:
        sigma = float(np.max(hi - lo)) / 4.0
    xs = np.linspace(lo[0], hi[0], shape[0])
    ys = np.linspace(lo[1], hi[1], shape[1])
    return [gaussian((x, y), amp=amp, sigma=sigma) for x in xs for y in ys]
