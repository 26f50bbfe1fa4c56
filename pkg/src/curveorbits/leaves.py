"""Isodrastic and isovolume leaves of curve families.

Classification compares leaf invariants: complement-region areas keyed by
the nesting forest in the plane, and band areas (equivalently mean heights)
for families of horizontal torus meridians.  Equal invariants are reported
as "same"; no ambient isotopy is constructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import orth

from . import _periodic
from .fields import VectorField, gaussian_affine_field, periodic_field, constant_field
from .geometry import CurveFamily, DiscreteCurve, enclosed_area, mean_height, region_areas
from .phase import generator_periods

KINDS = ("isodrastic", "isovolume")
SAME_ATOL = 1e-9
RANK_RTOL = 1e-8


def _curves(family):
    return family.curves if isinstance(family, CurveFamily) else tuple(family)


def isodrast_flux(family, xi) -> np.ndarray:
    """Per-component flux ``F_j = int (xi_x y' - xi_y x') ds`` of a deformation.

    ``xi`` is either a concatenated (M, 2) array or one (N_j, 2) array per
    curve.  The deformation is tangent to the isodrastic leaf iff every
    ``F_j`` vanishes.
    """
    curves = _curves(family)
    if isinstance(xi, (list, tuple)):
        parts = [np.asarray(x, dtype=float) for x in xi]
    else:
        xi = np.asarray(xi, dtype=float)
        bounds = np.cumsum([0] + [c.n for c in curves])
        if xi.shape[0] != bounds[-1]:
            raise ValueError("deformation has the wrong number of nodes")
        parts = [xi[bounds[j]:bounds[j + 1]] for j in range(len(curves))]
    out = []
    for c, x in zip(curves, parts):
        if x.shape != (c.n, 2):
            raise ValueError("deformation shape does not match the curve")
        v = c.velocity()
        out.append(float(_periodic.trapz(x[:, 0] * v[:, 1] - x[:, 1] * v[:, 0])))
    return np.array(out)


def field_flux(family, X: VectorField) -> np.ndarray:
    curves = _curves(family)
    return isodrast_flux(curves, [X.value(c.nodes) for c in curves])


def is_tangent(flux, tol=1e-8) -> bool:
    return bool(np.all(np.abs(flux) <= tol))


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class LeafInvariant:
    """Data that is constant along a leaf.

    ``signature`` describes the combinatorics (nesting forest shape in the
    plane, ``("meridians", k)`` on the torus); ``areas`` lists bounded region
    areas in the canonical order of that signature.  ``periods`` holds the
    generator integrals ``(int dx, int dy)`` per component, whose column span
    is the allowed joint shift of the flux coordinates for the isovolume kind.
    """

    kind: str
    ambient: str
    signature: tuple
    areas: tuple
    heights: tuple = ()
    periods: tuple = ()
    ambiguous: bool = False
    curve_regions: tuple = ()

    @property
    def cohomology_rank(self) -> int:
        """Rank of compactly supported degree-1 cohomology of the ambient (plane 0, torus 2)."""
        return 2 if self.ambient == "torus" else 0

    @property
    def shift_basis(self) -> np.ndarray:
        G = np.asarray(self.periods, dtype=float)
        if G.size == 0 or not np.any(G):
            return np.zeros((len(self.periods), 0))
        return orth(G)


def _canonical(family: CurveFamily, interior):
    ambiguous = False

    def canon(i):
        nonlocal ambiguous
        kids = sorted((canon(c) for c in family.children(i)), key=lambda t: (t[0], t[1][0]))
        shapes = [t[0] for t in kids]
        if len(set(shapes)) < len(shapes):
            ambiguous = True
        areas = [interior[i]]
        for t in kids:
            areas.extend(t[1])
        return tuple(shapes), areas

    roots = sorted((canon(r) for r in family.roots()), key=lambda t: (t[0], t[1][0]))
    shapes = [t[0] for t in roots]
    if len(set(shapes)) < len(shapes):
        ambiguous = True
    areas = [a for t in roots for a in t[1]]
    return tuple(shapes), tuple(areas), ambiguous


def leaf_invariants(family: CurveFamily, kind: str = "isodrastic") -> LeafInvariant:
    if kind not in KINDS:
        raise ValueError(f"unknown leaf kind {kind!r}")
    amb = family.ambient
    periods = tuple(tuple(float(v) for v in row) for row in generator_periods(family.curves))
    if all(c.contractible for c in family.curves):
        decomp = region_areas(family)
        interior = [r.area for r in decomp.regions[:family.k]]
        sig, areas, amb_flag = _canonical(family, interior)
        if amb.is_torus:
            areas = areas + (decomp.regions[-1].area,)
        return LeafInvariant(kind, amb.kind, ("forest", sig), areas, periods=periods,
                             ambiguous=amb_flag, curve_regions=tuple(interior))
    decomp = region_areas(family)  # validates the meridian case
    heights = tuple(sorted(mean_height(c) for c in family.curves))
    return LeafInvariant(kind, amb.kind, ("meridians", family.k),
                         tuple(sorted(r.area for r in decomp.regions)), heights=heights,
                         periods=periods, ambiguous=len(set(heights)) < len(heights))


def _circular_close(a, b, period, tol):
    d = np.mod(a - b, period)
    return np.minimum(d, period - d) <= tol


def same_leaf(inv1: LeafInvariant, inv2: LeafInvariant, tol: float = SAME_ATOL,
              ly: float = 1.0) -> str:
    """``"same"``, ``"different"`` or ``"incomparable"`` (combinatorics differ).

    Torus meridian families: isovolume leaves agree iff the heights agree up
    to one common shift mod ``ly``; isodrastic leaves need equal heights.
    """
    if inv1.kind != inv2.kind:
        raise ValueError("cannot compare invariants of different kinds")
    if inv1.ambient != inv2.ambient or inv1.signature != inv2.signature:
        return "incomparable"
    if inv1.signature[0] == "forest":
        a1, a2 = np.asarray(inv1.areas), np.asarray(inv2.areas)
        return "same" if np.all(np.abs(a1 - a2) <= tol) else "different"
    h1, h2 = np.asarray(inv1.heights), np.asarray(inv2.heights)
    k = h1.size
    if inv1.kind == "isodrastic":
        return "same" if np.all(_circular_close(h1, h2, ly, tol)) else "different"
    for r in range(k):
        t = h2[r] - h1[0]
        target = np.roll(h2, -r)
        if np.all(_circular_close(h1 + t, target, ly, tol)):
            return "same"
    return "different"


# ---------------------------------------------------------------------------
# codimension


def deformation_battery(family, n_fields: Optional[int] = None, seed: int = 0):
    """Random generic (not volume-preserving) deformation fields for rank probes."""
    curves = _curves(family)
    k = len(curves)
    n_fields = max(4 * k, 16) if n_fields is None else n_fields
    rng = np.random.default_rng(seed)
    amb = curves[0].ambient
    fields = []
    if amb.is_torus:
        for _ in range(n_fields):
            mx = int(rng.integers(0, 2))
            my = int(rng.integers(0, k + 2))
            fields.append(periodic_field(mx, my, rng.normal(size=2), rng.uniform(0, 2 * np.pi), amb.moduli))
        return fields
    pts = np.vstack([c.nodes for c in curves])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    diam = float(np.max(hi - lo))
    pad = 0.1 * diam
    sigma = max(diam / 4.0, 1e-3)
    for _ in range(n_fields):
        center = rng.uniform(lo - pad, hi + pad)
        fields.append(gaussian_affine_field(rng.normal(size=(2, 2)), rng.normal(size=2), center, sigma))
    return fields


def flux_matrix(family, fields: Sequence[VectorField]) -> np.ndarray:
    """Matrix (k, n_fields) of per-component fluxes."""
    return np.column_stack([field_flux(family, X) for X in fields])


def numerical_rank(A, rtol=RANK_RTOL) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def quotient_by_periods(A, curves):
    """Project flux columns onto the complement of the generator-period span."""
    G = generator_periods(curves)
    if not np.any(G):
        return A
    Q = orth(G)
    return A - Q @ (Q.T @ A)


def codim_rank(family, kind: str = "isodrastic", fields=None, seed: int = 0) -> int:
    """Numerical codimension of the leaf distribution at ``family``.

    Rank of the flux map over a battery of deformation fields; for the
    isovolume kind the fluxes are taken modulo the image of the torus
    generators.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown leaf kind {kind!r}")
    curves = _curves(family)
    fields = deformation_battery(curves, seed=seed) if fields is None else list(fields)
    if len(fields) < len(curves):
        raise ValueError("battery too small to certify rank: fewer fields than components")
    A = flux_matrix(curves, fields)
    if kind == "isovolume":
        A = quotient_by_periods(A, curves)
    return numerical_rank(A)


# ---------------------------------------------------------------------------
# Moser flow in the cylinder S^1 x R


def plateau_profile(t, a, w):
    """``lambda(t)`` and ``lambda'(t)``: 1 on ``[-a, a]``, bump transition of width ``w``."""
    t = np.asarray(t, dtype=float)
    u = (np.abs(t) - a) / w
    lam = np.zeros_like(t)
    dlam = np.zeros_like(t)
    lam[u <= 0] = 1.0
    mid = (u > 0) & (u < 1)
    um = u[mid]
    val = np.exp(1.0 - 1.0 / (1.0 - um ** 2))
    lam[mid] = val
    dlam[mid] = val * (-2.0 * um / (1.0 - um ** 2) ** 2) * np.sign(t[mid]) / w
    return lam, dlam


@dataclass(frozen=True, eq=False)
class MoserField:
    """Divergence-free field ``Z = (-lambda'(t) A(x), lambda(t) f(x))`` on the cylinder.

    ``A`` is the mean-zero periodic antiderivative of ``f``; on the plateau
    ``|t| <= a`` the field is ``f(x) d/dt`` and its time-1 flow maps the zero
    section onto the graph of ``f``.
    """

    f: np.ndarray
    antideriv: np.ndarray
    a: float
    w: float

    def lam(self, t):
        return plateau_profile(t, self.a, self.w)

    def __post_init__(self):
        # both interpolants share the modes of f; negligible ones are dropped
        object.__setattr__(self, "_interp", _periodic.TrigInterpolant(np.column_stack([self.f, self.antideriv]), 1e-15))

    def value(self, x, t):
        fa = self._interp(x)
        fx, ax = fa[:, 0], fa[:, 1]
        lam, dlam = self.lam(t)
        return np.column_stack([-dlam * ax, lam * fx])

    def divergence(self, x, t):
        """``d/dx Z_x + d/dt Z_t`` from analytic pieces, on the tensor grid ``x`` by ``t``."""
        da = _periodic.trig_interp(_periodic.diff(self.antideriv, "spectral"), x)
        fx = _periodic.trig_interp(self.f, x)
        _, dlam = self.lam(t)
        return -np.outer(da, dlam) + np.outer(fx, dlam)


@dataclass(frozen=True)
class MoserReport:
    max_divergence: float
    max_endpoint_error: float
    mean: float
    plateau: float
    steps: int


class NotIsodrasticError(ValueError):
    pass


def moser_cylinder_flow(f, resolution: int = 64, dt: float = 1e-3, mean_tol: float = 1e-10):
    """Build the Moser field for graph height ``f`` and verify it.

    Returns ``(MoserField, MoserReport)``: divergence on a ``resolution`` x
    ``resolution`` grid and the RK4 time-1 endpoints of ``(x_i, 0)`` against
    ``(x_i, f(x_i))``.
    """
    f = np.asarray(f, dtype=float)
    mean = float(_periodic.trapz(f))
    if abs(mean) > mean_tol:
        raise NotIsodrasticError(f"not isodrastic: mean of f is {mean:.3e}")
    a = float(np.max(np.abs(f)))
    w = max(a, 0.5)
    Z = MoserField(f, _periodic.antiderivative(f), a, w)

    xg = np.arange(resolution) / resolution
    tg = np.linspace(-(a + w), a + w, resolution)
    max_div = float(np.max(np.abs(Z.divergence(xg, tg))))

    n = f.shape[0]
    pts = np.column_stack([np.arange(n) / n, np.zeros(n)])
    steps = int(round(1.0 / dt))
    h = 1.0 / steps
    rhs = lambda q: Z.value(q[:, 0], q[:, 1])
    for _ in range(steps):
        k1 = rhs(pts)
        k2 = rhs(pts + 0.5 * h * k1)
        k3 = rhs(pts + 0.5 * h * k2)
        k4 = rhs(pts + h * k3)
        pts = pts + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    target = np.column_stack([np.arange(n) / n, f])
    err = float(np.max(np.abs(pts - target)))
    return Z, MoserReport(max_div, err, mean, a, steps)
