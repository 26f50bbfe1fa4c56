"""1-form densities on circles, augmentations along curves, and reparametrisations.

A 1-form density on a circle is stored as the scalar ``r(s)`` in
``rho = r(s) |ds| (x) ds`` relative to the uniform parameter (not arc
length).  Writing ``rho = |nu| (x) nu`` with ``nu = v ds`` gives
``r = v |v|``, so the length of ``rho`` is ``int sqrt|r| ds``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _periodic
from .geometry import DiscreteCurve

LENGTH_ATOL = 1e-9


class DensityError(ValueError):
    """Raised for vanishing densities where a nowhere-zero one is required."""


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class OneFormDensity:
    components: tuple

    def __post_init__(self):
        comps = tuple(_frozen(c) for c in self.components)
        for c in comps:
            if c.ndim != 1:
                raise DensityError("density components must be 1-d arrays")
        object.__setattr__(self, "components", comps)

    @classmethod
    def single(cls, r):
        return cls((r,))

    @property
    def k(self):
        return len(self.components)

    def check_nowhere_zero(self):
        for j, r in enumerate(self.components):
            zero = np.nonzero(r == 0.0)[0]
            if zero.size:
                raise DensityError(f"vanishing density: component {j} is zero at node {int(zero[0])}")
        return self


@dataclass(frozen=True, eq=False)
class Augmentation:
    """Density-valued covector ``w(s) |ds| (x) (a(s) dx + b(s) dy)`` along a curve."""

    w: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        w = _frozen(self.w)
        c = _frozen(self.c)
        if w.ndim != 1 or c.shape != (w.shape[0], 2):
            raise ValueError("augmentation needs w of shape (N,) and c of shape (N, 2)")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_wc(cls, wc):
        """Unit-weight representation of a weighted covector field."""
        wc = np.asarray(wc, dtype=float)
        return cls(np.ones(wc.shape[0]), wc)

    @property
    def n(self):
        return self.w.shape[0]

    @property
    def wc(self):
        return self.w[:, None] * self.c

    def __add__(self, other):
        return Augmentation.from_wc(self.wc + other.wc)

    def scaled(self, factor):
        return Augmentation(self.w, factor * self.c)


@dataclass(frozen=True)
class LengthSpectrum:
    lengths: tuple

    def __post_init__(self):
        if any(not (l > 0) for l in self.lengths):
            raise DensityError("lengths must be positive")

    def __iter__(self):
        return iter(self.lengths)

    def __len__(self):
        return len(self.lengths)


def volume_form(r):
    """Signed ``v`` with ``v |v| = r``: the volume form ``nu = v ds``."""
    r = np.asarray(r, dtype=float)
    return np.sign(r) * np.sqrt(np.abs(r))


def length_spectrum(rho: OneFormDensity) -> LengthSpectrum:
    rho.check_nowhere_zero()
    return LengthSpectrum(tuple(float(_periodic.trapz(np.sqrt(np.abs(r)))) for r in rho.components))


def orbit_type_equal(rho1: OneFormDensity, rho2: OneFormDensity, atol: float = LENGTH_ATOL) -> bool:
    """Same coadjoint Diff(S) orbit: equal length multisets (components may permute)."""
    if rho1.k != rho2.k:
        raise DensityError("densities have different component counts")
    l1 = np.sort(length_spectrum(rho1).lengths)
    l2 = np.sort(length_spectrum(rho2).lengths)
    return bool(np.all(np.abs(l1 - l2) <= atol))


def pullback_density(curve: DiscreteCurve, aug: Augmentation) -> np.ndarray:
    """``r(s) = w(s) <c(s), phi'(s)>``, the scalar of ``phi^* alpha``."""
    if aug.n != curve.n:
        raise ValueError(f"augmentation has {aug.n} nodes, curve has {curve.n}")
    v = curve.velocity()
    return aug.w * np.einsum("ij,ij->i", aug.c, v)


def rotate_to_covector(v):
    """``i_v mu`` for ``mu = dx ^ dy`` as a covector array ``(-v_y, v_x)``."""
    v = np.asarray(v, dtype=float)
    return np.column_stack([-v[:, 1], v[:, 0]])


def covector_to_vector(c):
    """Inverse of :func:`rotate_to_covector`."""
    c = np.asarray(c, dtype=float)
    return np.column_stack([c[:, 1], -c[:, 0]])


def epsilon_section(curve: DiscreteCurve, nu_scale: Optional[np.ndarray] = None) -> Augmentation:
    """The conormal section ``eps_C = |nu_C| (x) i_{t_C} mu``.

    ``nu_C = lambda(s) |phi'(s)| ds`` with ``lambda = nu_scale`` (default 1)
    and ``t_C`` its dual vector field.  The product does not depend on
    ``lambda``; the result is returned in the canonical split
    ``w = |phi'|``, ``c = i_{phi'/|phi'|} mu``.
    """
    v = curve.velocity()
    speed = np.hypot(v[:, 0], v[:, 1])
    if np.min(speed) < 1e-12:
        raise ValueError("degenerate node spacing: |phi'| below 1e-12")
    lam = np.ones(curve.n) if nu_scale is None else np.asarray(nu_scale, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("nu_scale must be positive")
    weight = lam * speed
    t_c = v / weight[:, None]
    wc = weight[:, None] * rotate_to_covector(t_c)
    return Augmentation(speed, wc / speed[:, None])


# ---------------------------------------------------------------------------
# reparametrisations


@dataclass(frozen=True)
class Reparametrization:
    """Orientation-preserving circle diffeomorphism ``psi(s) = s + g(s)``.

    ``psi`` and ``dpsi`` are vectorised callables; ``g`` must be 1-periodic.
    """

    psi: Callable
    dpsi: Callable

    @classmethod
    def fourier(cls, amplitudes: Sequence[float], phases: Sequence[float]):
        """``psi(s) = s + sum a_j sin(2 pi j s + p_j) / (2 pi j)``; needs ``sum|a_j| < 1``."""
        amps = np.asarray(amplitudes, dtype=float)
        phs = np.asarray(phases, dtype=float)
        if np.sum(np.abs(amps)) >= 1.0:
            raise ValueError("sum of |amplitudes| must be < 1 for a diffeomorphism")
        j = np.arange(1, len(amps) + 1)

        def psi(s):
            s = np.asarray(s, dtype=float)
            arg = 2 * np.pi * np.multiply.outer(s, j) + phs
            return s + np.sum(amps * np.sin(arg) / (2 * np.pi * j), axis=-1)

        def dpsi(s):
            s = np.asarray(s, dtype=float)
            arg = 2 * np.pi * np.multiply.outer(s, j) + phs
            return 1.0 + np.sum(amps * np.cos(arg), axis=-1)

        return cls(psi, dpsi)

    @classmethod
    def random(cls, rng, modes=2, strength=0.3):
        amps = rng.uniform(-1, 1, modes)
        amps *= strength / np.sum(np.abs(amps))
        return cls.fourier(amps, rng.uniform(0, 2 * np.pi, modes))

    @classmethod
    def rotation(cls, shift):
        return cls(lambda s: np.asarray(s, dtype=float) + shift,
                   lambda s: np.ones_like(np.asarray(s, dtype=float)))


def compose_curve(curve: DiscreteCurve, psi: Reparametrization) -> DiscreteCurve:
    """Samples of ``phi o psi`` via trigonometric interpolation of ``phi``."""
    s = psi.psi(curve.s)
    nodes = _periodic.trig_interp(curve.periodic_part(), s) + np.outer(s, curve.period)
    return curve.with_nodes(nodes)


def pullback_augmentation(aug: Augmentation, psi: Reparametrization, n: int) -> Augmentation:
    """``psi^* alpha``: weights pick up ``psi'``, covectors are transported."""
    s = psi.psi(np.arange(n) / n)
    w = _periodic.trig_interp(aug.w, s) * psi.dpsi(np.arange(n) / n)
    c = _periodic.trig_interp(aug.c, s)
    return Augmentation(w, c)


def pullback_by(rho: OneFormDensity, psi: Reparametrization) -> OneFormDensity:
    """``psi^* rho`` for ``rho = r |ds| (x) ds``: ``r(psi) * psi'^2``."""
    out = []
    for r in rho.components:
        s = np.arange(r.shape[0]) / r.shape[0]
        out.append(_periodic.trig_interp(r, psi.psi(s)) * psi.dpsi(s) ** 2)
    return OneFormDensity(tuple(out))
