"""Closed polylines in the plane and on the flat torus.

A :class:`DiscreteCurve` samples an embedding ``S^1 -> M`` on the uniform
parameter grid ``s_i = i/N``.  Torus curves are stored as lifted coordinates
in ``R^2``; the lift closes up to a lattice vector ``(p*Lx, q*Ly)`` whose
integers ``(p, q)`` are the homology class of the curve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import _periodic

MIN_NODES = 8
CROSS_TOL = 1e-12


class GeometryError(ValueError):
    """A curve or family violates an embedding invariant."""


@dataclass(frozen=True)
class Ambient:
    kind: str = "plane"
    moduli: tuple = (1.0, 1.0)

    def __post_init__(self):
        if self.kind not in ("plane", "torus"):
            raise GeometryError(f"unknown ambient {self.kind!r}")
        lx, ly = (float(m) for m in self.moduli)
        if not (lx > 0 and ly > 0):
            raise GeometryError("torus moduli must be positive")
        object.__setattr__(self, "moduli", (lx, ly))

    @property
    def is_torus(self):
        return self.kind == "torus"

    @property
    def area(self):
        return self.moduli[0] * self.moduli[1] if self.is_torus else np.inf


PLANE = Ambient()


def torus(lx=1.0, ly=1.0):
    return Ambient("torus", (lx, ly))


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class DiscreteCurve:
    """Closed curve sampled at ``N >= 8`` nodes on a uniform parameter grid.

    Parameters
    ----------
    nodes : array_like, shape (N, 2)
        Node positions; lifted coordinates on the torus.
    ambient : Ambient
        ``PLANE`` (default) or a torus from :func:`torus`.
    diff : {"fd4", "spectral"}
        Periodic differentiation rule used for tangents.
    validate : bool
        Run the O(N^2) simplicity check.  Only internal constructors that
        already know the curve is embedded skip it.
    """

    def __init__(self, nodes, ambient: Ambient = PLANE, diff: str = "fd4", validate: bool = True):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise GeometryError("nodes must have shape (N, 2)")
        if nodes.shape[0] < MIN_NODES:
            raise GeometryError(f"a curve needs at least {MIN_NODES} nodes, got {nodes.shape[0]}")
        if not np.all(np.isfinite(nodes)):
            raise GeometryError("nodes must be finite")
        if diff not in _periodic.DIFF_METHODS:
            raise GeometryError(f"unknown differentiation method {diff!r}")
        self.ambient = ambient
        self.diff = diff
        if ambient.is_torus:
            lengths = np.asarray(ambient.moduli)
            winding = np.round((nodes[-1] - nodes[0]) / lengths)
            self.homology = (int(winding[0]), int(winding[1]))
            self.period = _readonly(winding * lengths)
        else:
            self.homology = (0, 0)
            self.period = _readonly(np.zeros(2))
        self.nodes = _readonly(nodes)
        steps = np.diff(np.vstack([nodes, nodes[:1] + self.period]), axis=0)
        if np.any(np.hypot(steps[:, 0], steps[:, 1]) == 0.0):
            raise GeometryError("consecutive nodes must be distinct")
        if ambient.is_torus and np.any(np.abs(steps) >= 0.5 * np.asarray(ambient.moduli)):
            raise GeometryError("torus lift is inconsistent: an edge spans half the fundamental domain")
        if validate and _self_intersects(self):
            raise GeometryError("curve is not simple (self-intersection)")

    def __repr__(self):
        return f"DiscreteCurve(N={self.n}, ambient={self.ambient.kind}, homology={self.homology})"

    @property
    def n(self):
        return self.nodes.shape[0]

    @property
    def ds(self):
        return 1.0 / self.n

    @property
    def s(self):
        return np.arange(self.n) / self.n

    @property
    def contractible(self):
        return self.homology == (0, 0)

    def periodic_part(self):
        """Nodes minus the linear drift ``s * period``; a periodic array."""
        return self.nodes - np.outer(self.s, self.period)

    def velocity(self):
        """``phi'(s)`` at the nodes, shape (N, 2)."""
        return _periodic.diff(self.periodic_part(), self.diff) + self.period

    def speed(self):
        v = self.velocity()
        return np.hypot(v[:, 0], v[:, 1])

    def closed_nodes(self):
        """Nodes with the (lifted) first node appended, shape (N+1, 2)."""
        return np.vstack([self.nodes, self.nodes[:1] + self.period])

    def segments(self):
        c = self.closed_nodes()
        return c[:-1], c[1:]

    def with_nodes(self, nodes, validate=False):
        return DiscreteCurve(nodes, self.ambient, self.diff, validate=validate)

    def reversed(self):
        """Same point set, opposite orientation, node 0 kept first."""
        rest = self.nodes[:0:-1] - self.period
        return self.with_nodes(np.vstack([self.nodes[:1], rest]))

    def rolled(self, shift):
        """Cyclic relabelling of the nodes (start at node ``shift``)."""
        shift = int(shift) % self.n
        nodes = np.vstack([self.nodes[shift:], self.nodes[:shift] + self.period])
        return self.with_nodes(nodes)

    def bbox(self):
        return self.nodes.min(axis=0), self.nodes.max(axis=0)


def circle(radius=1.0, n=256, center=(0.0, 0.0), clockwise=False, diff="fd4", phase=0.0):
    s = np.arange(n) / n + phase
    sign = -1.0 if clockwise else 1.0
    nodes = np.column_stack([center[0] + radius * np.cos(2 * np.pi * s),
                             center[1] + sign * radius * np.sin(2 * np.pi * s)])
    return DiscreteCurve(nodes, PLANE, diff, validate=False)


def ellipse(a, b, n=256, center=(0.0, 0.0), diff="fd4"):
    s = np.arange(n) / n
    nodes = np.column_stack([center[0] + a * np.cos(2 * np.pi * s),
                             center[1] + b * np.sin(2 * np.pi * s)])
    return DiscreteCurve(nodes, PLANE, diff, validate=False)


def meridian(height, n=64, ambient: Optional[Ambient] = None, wave=None, diff="fd4"):
    """Horizontal torus curve ``y = height + wave(x)``, homology class (1, 0)."""
    ambient = ambient or torus()
    lx, _ = ambient.moduli
    x = lx * np.arange(n) / n
    y = np.full(n, float(height))
    if wave is not None:
        y = y + wave(x)
    return DiscreteCurve(np.column_stack([x, y]), ambient, diff, validate=False)


# ---------------------------------------------------------------------------
# areas


def enclosed_area(curve: DiscreteCurve) -> float:
    """Signed shoelace area; positive for counterclockwise curves."""
    if not curve.contractible:
        raise GeometryError("enclosed area is only defined for null-homotopic curves")
    x, y = curve.nodes[:, 0], curve.nodes[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def quadrature_area(curve: DiscreteCurve) -> float:
    """Signed area ``1/2 * int (x y' - y x') ds`` by periodic quadrature.

    Unlike :func:`enclosed_area` this treats the nodes as samples of a smooth
    curve, so its error is that of the differentiation rule rather than the
    O(N^-2) polygon error.
    """
    if not curve.contractible:
        raise GeometryError("enclosed area is only defined for null-homotopic curves")
    p = curve.nodes - curve.nodes.mean(axis=0)
    v = curve.velocity()
    return 0.5 * float(_periodic.trapz(p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]))


def mean_height(curve: DiscreteCurve) -> float:
    """Area-weighted height ``(1/(p Lx)) * oint y dx`` of a class-(p, 0) torus curve, mod ``Ly``."""
    p, q = curve.homology
    if q != 0 or p == 0:
        raise GeometryError("mean height needs a horizontal (p, 0) torus curve with p != 0")
    c = curve.closed_nodes()
    integral = np.sum(0.5 * (c[1:, 1] + c[:-1, 1]) * np.diff(c[:, 0]))
    lx, ly = curve.ambient.moduli
    return float(np.mod(integral / (p * lx), ly))


# ---------------------------------------------------------------------------
# intersections


def _segment_hits(a0, a1, b0, b1, skip=None):
    """Boolean matrix of segment pairs that cross or touch.

    ``skip`` is an optional boolean mask of pairs to ignore.
    """
    d1 = (a1 - a0)[:, None, :]
    d2 = (b1 - b0)[None, :, :]
    w = b0[None, :, :] - a0[:, None, :]
    denom = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
    cw2 = w[..., 0] * d2[..., 1] - w[..., 1] * d2[..., 0]
    cw1 = w[..., 0] * d1[..., 1] - w[..., 1] * d1[..., 0]
    scale = np.abs(d1[..., 0]) + np.abs(d1[..., 1]) + np.abs(d2[..., 0]) + np.abs(d2[..., 1])
    parallel = np.abs(denom) <= 1e-14 * scale ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        t = cw2 / denom
        u = cw1 / denom
    lo, hi = -CROSS_TOL, 1.0 + CROSS_TOL
    hit = ~parallel & (t >= lo) & (t <= hi) & (u >= lo) & (u <= hi)
    # collinear overlap
    collinear = parallel & (np.abs(cw1) <= 1e-14 * scale ** 2)
    if np.any(collinear):
        dd = np.sum(d1 * d1, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            t0 = np.sum(w * d1, axis=-1) / dd
            t1 = np.sum((w + d2) * d1, axis=-1) / dd
        overlap = (np.maximum(t0, t1) >= lo) & (np.minimum(t0, t1) <= hi)
        hit |= collinear & overlap
    if skip is not None:
        hit &= ~skip
    return hit


def _segments_intersect(a0, a1, b0, b1, same=None, block=256):
    """True if any segment of A meets any segment of B.

    ``same`` gives the index offset when B is a copy of A (self test): pairs
    that are adjacent in the cyclic order are skipped.
    """
    bmin = np.minimum(b0, b1)
    bmax = np.maximum(b0, b1)
    na, nb = a0.shape[0], b0.shape[0]
    for start in range(0, na, block):
        sl = slice(start, min(start + block, na))
        lo = np.minimum(a0[sl], a1[sl]).min(axis=0) - CROSS_TOL
        hi = np.maximum(a0[sl], a1[sl]).max(axis=0) + CROSS_TOL
        cand = np.nonzero(np.all(bmax >= lo, axis=1) & np.all(bmin <= hi, axis=1))[0]
        if cand.size == 0:
            continue
        skip = None
        if same is not None:
            ia = np.arange(sl.start, sl.stop)[:, None]
            gap = np.mod(ia - cand[None, :], na)
            skip = (gap <= 1) | (gap == na - 1)
        if np.any(_segment_hits(a0[sl], a1[sl], b0[cand], b1[cand], skip)):
            return True
    return False


def _lattice_shifts(ambient):
    if not ambient.is_torus:
        return [np.zeros(2)]
    lx, ly = ambient.moduli
    return [np.array([i * lx, j * ly]) for i in (-1, 0, 1) for j in (-1, 0, 1)]


def _shares_endpoint(a0, a1, b0, b1):
    pts_a = np.stack([a0, a1], axis=1)[:, None, :, None, :]
    pts_b = np.stack([b0, b1], axis=1)[None, :, None, :, :]
    d = np.abs(pts_a - pts_b).sum(axis=-1)
    return np.any(d < 1e-12, axis=(2, 3))


def _self_intersects(curve: DiscreteCurve) -> bool:
    a0, a1 = curve.segments()
    if _segments_intersect(a0, a1, a0, a1, same=True):
        return True
    if not curve.ambient.is_torus:
        return False
    for shift in _lattice_shifts(curve.ambient):
        if not np.any(shift):
            continue
        b0, b1 = a0 + shift, a1 + shift
        hits = _cross_hits(a0, a1, b0, b1)
        if hits is not None and np.any(hits & ~_shares_endpoint(a0, a1, b0, b1)):
            return True
    return False


def _cross_hits(a0, a1, b0, b1):
    lo = np.maximum(np.minimum(a0, a1).min(axis=0), np.minimum(b0, b1).min(axis=0))
    hi = np.minimum(np.maximum(a0, a1).max(axis=0), np.maximum(b0, b1).max(axis=0))
    if np.any(lo > hi + CROSS_TOL):
        return None
    return _segment_hits(a0, a1, b0, b1)


def curves_intersect(c1: DiscreteCurve, c2: DiscreteCurve) -> bool:
    a0, a1 = c1.segments()
    b0, b1 = c2.segments()
    base = np.zeros(2)
    if c1.ambient.is_torus:
        # bring both lifts near the fundamental domain before testing translates
        lengths = np.asarray(c1.ambient.moduli)
        base = np.floor(c1.nodes[0] / lengths) * lengths - np.floor(c2.nodes[0] / lengths) * lengths
    for shift in _lattice_shifts(c1.ambient):
        off = base + shift
        if c1.ambient.is_torus:
            # long curves may need more than one period; translate along their own periods too
            periods = [np.zeros(2), c2.period, -c2.period] if np.any(c2.period) else [np.zeros(2)]
        else:
            periods = [np.zeros(2)]
        for per in periods:
            if _segments_intersect(a0, a1, b0 + off + per, b1 + off + per):
                return True
    return False


# ---------------------------------------------------------------------------
# containment and families


def point_in_polygon(points, polygon) -> np.ndarray:
    """Even-odd ray casting; ``polygon`` is an (M, 2) closed vertex loop."""
    points = np.atleast_2d(points)
    x, y = points[:, 0][:, None], points[:, 1][:, None]
    px, py = polygon[:, 0][None, :], polygon[:, 1][None, :]
    qx, qy = np.roll(px, -1, axis=1), np.roll(py, -1, axis=1)
    straddle = (py > y) != (qy > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = px + (y - py) * (qx - px) / (qy - py)
    inside = straddle & (x < xcross)
    return np.mod(inside.sum(axis=1), 2) == 1


def _contains(outer: DiscreteCurve, inner: DiscreteCurve) -> bool:
    probe = inner.nodes[:1]
    if not outer.ambient.is_torus:
        return bool(point_in_polygon(probe, outer.nodes)[0])
    return any(point_in_polygon(probe + s, outer.nodes)[0] for s in _lattice_shifts(outer.ambient))


@dataclass(frozen=True)
class CurveFamily:
    """Pairwise disjoint simple closed curves in one ambient.

    ``parents[i]`` is the index of the innermost curve containing curve ``i``
    (``-1`` for outermost curves).  Nesting is only computed for null-homotopic
    curves; non-contractible torus curves get ``-1``.
    """

    curves: tuple
    parents: tuple = field(init=False)
    homology: tuple = field(init=False)

    def __post_init__(self):
        curves = tuple(self.curves)
        if not curves:
            raise GeometryError("a family needs at least one curve")
        amb = curves[0].ambient
        if any(c.ambient != amb for c in curves):
            raise GeometryError("all curves of a family must share the ambient")
        for i in range(len(curves)):
            for j in range(i + 1, len(curves)):
                if curves_intersect(curves[i], curves[j]):
                    raise GeometryError(f"curves {i},{j} intersect")
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "homology", tuple(c.homology for c in curves))
        object.__setattr__(self, "parents", tuple(_nesting(curves)))

    @property
    def ambient(self):
        return self.curves[0].ambient

    @property
    def k(self):
        return len(self.curves)

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def __getitem__(self, i):
        return self.curves[i]

    def children(self, i):
        return [j for j, p in enumerate(self.parents) if p == i]

    def roots(self):
        return [j for j, p in enumerate(self.parents) if p == -1]


def _nesting(curves: Sequence[DiscreteCurve]):
    areas = [abs(enclosed_area(c)) if c.contractible else np.inf for c in curves]
    parents = []
    for i, ci in enumerate(curves):
        best, best_area = -1, np.inf
        if ci.contractible:
            for j, cj in enumerate(curves):
                if j == i or not cj.contractible:
                    continue
                if areas[j] < best_area and _contains(cj, ci):
                    best, best_area = j, areas[j]
        parents.append(best)
    return parents


@dataclass(frozen=True)
class Region:
    area: float
    bounded: bool
    boundary: tuple


@dataclass(frozen=True)
class RegionDecomposition:
    regions: tuple

    def finite_areas(self):
        return [r.area for r in self.regions if r.bounded]


def region_areas(family: CurveFamily) -> RegionDecomposition:
    """Complement components of the family with their areas.

    Plane: one bounded region per curve (its interior minus its children)
    plus the unbounded region.  Torus with null-homotopic curves: the same
    interiors plus the outer region of area ``Lx*Ly - sum(roots)``.  Torus with
    horizontal non-contractible curves: the bands between consecutive curves.
    """
    curves = family.curves
    amb = family.ambient
    contractible = [c.contractible for c in curves]
    if all(contractible):
        areas = [abs(enclosed_area(c)) for c in curves]
        regions = []
        for i in range(len(curves)):
            kids = family.children(i)
            regions.append(Region(areas[i] - sum(areas[j] for j in kids), True, (i, *kids)))
        roots = tuple(family.roots())
        if amb.is_torus:
            regions.append(Region(amb.area - sum(areas[j] for j in roots), True, roots))
        else:
            regions.append(Region(np.inf, False, roots))
        return RegionDecomposition(tuple(regions))
    if any(contractible):
        raise GeometryError("mixed contractible and non-contractible torus curves are not supported")
    if any(h[1] != 0 or abs(h[0]) != 1 for h in family.homology):
        raise GeometryError("non-contractible torus curves must be horizontal meridians (class (+-1, 0))")
    lx, ly = amb.moduli
    heights = np.array([mean_height(c) for c in curves])
    order = np.argsort(heights, kind="stable")
    regions = []
    k = len(curves)
    for a in range(k):
        i, j = order[a], order[(a + 1) % k]
        gap = heights[j] - heights[i]
        if k == 1 or gap <= 0:
            gap += ly
        regions.append(Region(lx * gap, True, (int(i), int(j)) if k > 1 else (int(i),)))
    return RegionDecomposition(tuple(regions))


# ---------------------------------------------------------------------------
# resampling


def resample(curve: DiscreteCurve, n: int) -> DiscreteCurve:
    """Arc-length-proportional resampling by periodic cubic interpolation.

    The chord-length parametrisation of the input is interpolated with a
    periodic cubic spline and sampled at ``n`` equally spaced chord-length
    values starting at node 0.
    """
    if n < MIN_NODES:
        raise GeometryError(f"resample needs at least {MIN_NODES} nodes")
    closed = curve.closed_nodes()
    seg = np.hypot(*np.diff(closed, axis=0).T)
    t = np.concatenate([[0.0], np.cumsum(seg)])
    total = t[-1]
    drift = np.outer(t / total, curve.period)
    spline = CubicSpline(t, closed - drift, bc_type="periodic")
    tk = total * np.arange(n) / n
    nodes = spline(tk) + np.outer(tk / total, curve.period)
    return curve.with_nodes(nodes)
