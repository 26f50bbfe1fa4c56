"""Scene files, CSV reports and SVG drawings.

A scene is a JSON document::

    {"name": "...",
     "ambient": {"type": "plane" | "torus", "moduli": [Lx, Ly]},
     "curves": [{"nodes": [[x, y], ...], "diff": "fd4"} | {"shape": "circle", ...}],
     "densities": [{"curve": 0, "values": [...], "nowhere_zero": true}],
     "augmentations": [{"curve": 0, "w": [...], "c": [[a, b], ...]}],
     "dipoles": [{"curve": 0, "u": [[ux, uy], ...]}],
     "hamiltonians": [{"type": "gaussian", "center": [x, y], "amp": 1, "sigma": 0.5, "cutoff": [r0, r1]}],
     "run": {"seed": 0, "dt": 1e-3, "T": 1.0, "tol": 1e-6, "kind": "isodrastic"},
     "graph": {"n": 256, "modes": [[j, a_cos, a_sin], ...]},
     "lsq": [l1^2, l2^2, ...]}

Floats are written with the shortest repr that round-trips, so
parse -> dump -> parse is bit-exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

import jsonschema
import numpy as np

from .densities import Augmentation, DensityError, OneFormDensity
from .fields import HamiltonianSpec
from .geometry import (Ambient, CurveFamily, DiscreteCurve, GeometryError, PLANE, circle, ellipse,
                       meridian, torus)

_num = {"type": "number"}
_point = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_index = {"type": "integer", "minimum": 0}

SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["ambient", "curves"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "ambient": {
            "type": "object",
            "required": ["type"],
            "additionalProperties": False,
            "properties": {
                "type": {"enum": ["plane", "torus"]},
                "moduli": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                           "minItems": 2, "maxItems": 2},
            },
        },
        "curves": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "nodes": {"type": "array", "items": _point, "minItems": 8},
                    "diff": {"enum": ["fd4", "spectral"]},
                    "shape": {"enum": ["circle", "ellipse", "meridian"]},
                    "center": _point,
                    "radius": {"type": "number", "exclusiveMinimum": 0},
                    "a": {"type": "number", "exclusiveMinimum": 0},
                    "b": {"type": "number", "exclusiveMinimum": 0},
                    "height": _num,
                    "n": {"type": "integer", "minimum": 8},
                    "clockwise": {"type": "boolean"},
                    "wave": {"type": "array", "items": _point},
                },
                "additionalProperties": False,
                "oneOf": [{"required": ["nodes"]}, {"required": ["shape", "n"]}],
            },
        },
        "densities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["curve", "values"],
                "additionalProperties": False,
                "properties": {"curve": _index, "values": {"type": "array", "items": _num},
                               "nowhere_zero": {"type": "boolean"}},
            },
        },
        "augmentations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["curve", "w", "c"],
                "additionalProperties": False,
                "properties": {"curve": _index, "w": {"type": "array", "items": _num},
                               "c": {"type": "array", "items": _point}},
            },
        },
        "dipoles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["curve", "u"],
                "additionalProperties": False,
                "properties": {"curve": _index, "u": {"type": "array", "items": _point}},
            },
        },
        "hamiltonians": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["type"],
                "additionalProperties": False,
                "properties": {
                    "type": {"enum": ["gaussian", "polynomial", "linear", "zero"]},
                    "center": _point,
                    "amp": _num,
                    "sigma": {"type": "number", "exclusiveMinimum": 0},
                    "cutoff": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                               "minItems": 2, "maxItems": 2},
                    "coeffs": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}},
                    "gradient": _point,
                },
            },
        },
        "run": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "seed": {"type": "integer"},
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "T": {"type": "number", "exclusiveMinimum": 0},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "kind": {"enum": ["isodrastic", "isovolume"]},
            },
        },
        "graph": {
            "type": "object",
            "required": ["n", "modes"],
            "additionalProperties": False,
            "properties": {"n": {"type": "integer", "minimum": 8},
                           "modes": {"type": "array",
                                     "items": {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}}},
        },
        "lsq": {"type": "array", "items": {"type": "integer", "minimum": 1}},
    },
}


class SceneError(ValueError):
    """Schema or invariant violation while loading a scene."""


@dataclass(frozen=True)
class RunParams:
    seed: int = 0
    dt: float = 1e-3
    T: float = 1.0
    tol: float = 1e-6
    kind: str = "isodrastic"


def _reject_constant(name):
    raise SceneError(f"non-finite number {name} is not allowed")


def _path(err) -> str:
    out = "$"
    for part in err.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def _curve_from(spec, ambient: Ambient, j: int) -> DiscreteCurve:
    diff = spec.get("diff", "fd4")
    if "nodes" in spec:
        return DiscreteCurve(spec["nodes"], ambient, diff)
    shape, n = spec["shape"], spec["n"]
    center = tuple(spec.get("center", (0.0, 0.0)))
    if shape == "circle":
        if "radius" not in spec:
            raise SceneError(f"$.curves[{j}]: circle needs 'radius'")
        c = circle(spec["radius"], n, center, spec.get("clockwise", False), diff)
    elif shape == "ellipse":
        if "a" not in spec or "b" not in spec:
            raise SceneError(f"$.curves[{j}]: ellipse needs 'a' and 'b'")
        c = ellipse(spec["a"], spec["b"], n, center, diff)
    else:
        if not ambient.is_torus:
            raise SceneError(f"$.curves[{j}]: meridians live on the torus")
        modes = spec.get("wave", [])
        lx = ambient.moduli[0]
        wave = (lambda x: sum(a * np.sin(2 * np.pi * int(m) * x / lx) for m, a in modes)) if modes else None
        c = meridian(spec.get("height", 0.0), n, ambient, wave, diff)
    return DiscreteCurve(c.nodes, ambient, diff)


@dataclass(eq=False)
class Scene:
    raw: dict
    ambient: Ambient
    family: CurveFamily
    densities: dict = field(default_factory=dict)
    augmentations: dict = field(default_factory=dict)
    dipoles: dict = field(default_factory=dict)
    hamiltonians: tuple = ()
    run: RunParams = RunParams()

    @property
    def name(self) -> str:
        return self.raw.get("name", "scene")

    @property
    def curves(self):
        return self.family.curves

    def __eq__(self, other):
        return isinstance(other, Scene) and self.raw == other.raw

    def graph(self) -> Optional[np.ndarray]:
        g = self.raw.get("graph")
        if g is None:
            return None
        x = np.arange(g["n"]) / g["n"]
        f = np.zeros(g["n"])
        for j, ac, as_ in g["modes"]:
            f += ac * np.cos(2 * np.pi * j * x) + as_ * np.sin(2 * np.pi * j * x)
        return f

    def point(self):
        """Cotangent point built from the augmentations (one per curve)."""
        from .phase import CotangentPoint
        missing = [j for j in range(self.family.k) if j not in self.augmentations]
        if missing:
            raise SceneError(f"curve {missing[0]} has no augmentation")
        return CotangentPoint(self.curves, tuple(self.augmentations[j] for j in range(self.family.k)))

    def dipole_loops(self):
        from .dipoles import DipoleLoop
        return {j: DipoleLoop(self.curves[j], u) for j, u in self.dipoles.items()}


def _curve_index(entry, key, j, k):
    i = entry["curve"]
    if i >= k:
        raise SceneError(f"$.{key}[{j}].curve: index {i} out of range for {k} curves")
    return i


def scene_from_dict(doc: dict) -> Scene:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as err:
        raise SceneError(f"{_path(err)}: {err.message}") from None
    amb_doc = doc["ambient"]
    if amb_doc["type"] == "torus":
        ambient = torus(*amb_doc.get("moduli", (1.0, 1.0)))
    else:
        ambient = PLANE
    try:
        curves = [_curve_from(spec, ambient, j) for j, spec in enumerate(doc["curves"])]
        family = CurveFamily(tuple(curves))
    except GeometryError as err:
        raise SceneError(str(err)) from None
    k = family.k
    dens = {}
    for j, d in enumerate(doc.get("densities", [])):
        i = _curve_index(d, "densities", j, k)
        vals = np.asarray(d["values"], dtype=float)
        if vals.shape[0] != curves[i].n:
            raise SceneError(f"$.densities[{j}]: {vals.shape[0]} values for a curve with {curves[i].n} nodes")
        if d.get("nowhere_zero", False):
            zero = np.nonzero(vals == 0.0)[0]
            if zero.size:
                raise SceneError(f"$.densities[{j}]: vanishing density at node {int(zero[0])} (declared nowhere zero)")
        dens[i] = vals
    augs = {}
    for j, a in enumerate(doc.get("augmentations", [])):
        i = _curve_index(a, "augmentations", j, k)
        w = np.asarray(a["w"], dtype=float)
        c = np.asarray(a["c"], dtype=float)
        if w.shape[0] != curves[i].n or c.shape[0] != curves[i].n:
            raise SceneError(f"$.augmentations[{j}]: node count does not match curve {i}")
        augs[i] = Augmentation(w, c)
    dips = {}
    for j, dd in enumerate(doc.get("dipoles", [])):
        i = _curve_index(dd, "dipoles", j, k)
        u = np.asarray(dd["u"], dtype=float)
        if u.shape[0] != curves[i].n:
            raise SceneError(f"$.dipoles[{j}]: node count does not match curve {i}")
        from .dipoles import DipoleLoop
        try:
            DipoleLoop(curves[i], u)
        except ValueError as err:
            raise SceneError(f"$.dipoles[{j}]: {err}") from None
        dips[i] = u
    try:
        hams = tuple(HamiltonianSpec.from_dict(h) for h in doc.get("hamiltonians", []))
    except (KeyError, ValueError) as err:
        raise SceneError(f"$.hamiltonians: {err}") from None
    run = RunParams(**doc.get("run", {}))
    if run.dt > run.T:
        raise SceneError("$.run: dt must not exceed T")
    return Scene(doc, ambient, family, dens, augs, dips, hams, run)


def parse_scene(text: str) -> Scene:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as err:
        raise SceneError(f"invalid JSON: {err}") from None
    return scene_from_dict(doc)


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())


def dump_scene(scene: Scene) -> str:
    return json.dumps(scene.raw, indent=1, allow_nan=False)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ReportRow:
    metric: str
    value: Any
    tolerance: Optional[float] = None
    passed: Optional[bool] = None

    @classmethod
    def check(cls, metric, value, tolerance):
        """Row for ``|value| <= tolerance``."""
        return cls(metric, value, tolerance, bool(abs(value) <= tolerance))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


CSV_HEADER = ("metric", "value", "tolerance", "pass")


def emit_report(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.metric, _fmt(r.value), _fmt(r.tolerance), _fmt(r.passed)])
    return buf.getvalue()


def report_passed(rows: Iterable[ReportRow]) -> bool:
    return all(r.passed is not False for r in rows)


def trajectory_csv(tr, nodes: bool = False) -> str:
    """One row per sample time: ``t, area, length, moment`` (plus node and u columns)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["t", "area", "length", "moment"]
    n = tr.curves[0].n if len(tr) else 0
    if nodes:
        for i in range(n):
            head += [f"x{i}", f"y{i}", f"ux{i}", f"uy{i}"]
    w.writerow(head)
    for i in range(len(tr)):
        row = [_fmt(tr.times[i]), _fmt(tr.area[i]), _fmt(tr.length[i]), _fmt(tr.moment[i])]
        if nodes:
            for p, u in zip(tr.curves[i].nodes, tr.us[i]):
                row += [_fmt(p[0]), _fmt(p[1]), _fmt(u[0]), _fmt(u[1])]
        w.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# SVG

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def svg_scene(curves: Sequence[DiscreteCurve], quivers: Optional[dict] = None,
              labels: Sequence[tuple] = (), size: int = 480, title: str = "") -> str:
    """Deterministic SVG: curves as closed paths, optional ``u`` arrows, text labels.

    ``quivers`` maps curve index to an (N, 2) array; ``labels`` holds
    ``(x, y, text)`` in scene coordinates.
    """
    pts = np.vstack([c.nodes for c in curves])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(np.max(hi - lo)) or 1.0
    margin = 0.1 * span
    lo, hi = lo - margin, hi + margin
    scale = size / float(np.max(hi - lo))
    tx = lambda p: ((p[0] - lo[0]) * scale, (hi[1] - p[1]) * scale)
    wpx = (hi[0] - lo[0]) * scale
    hpx = (hi[1] - lo[1]) * scale
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{wpx:.1f}" height="{hpx:.1f}" '
           f'viewBox="0 0 {wpx:.1f} {hpx:.1f}">']
    if title:
        out.append(f"<title>{title}</title>")
    for j, c in enumerate(curves):
        col = PALETTE[j % len(PALETTE)]
        nodes = c.nodes if c.contractible else c.closed_nodes()
        d = " ".join(("M" if i == 0 else "L") + "{:.3f},{:.3f}".format(*tx(p)) for i, p in enumerate(nodes))
        if c.contractible:
            d += " Z"
        out.append(f'<path d="{d}" fill="none" stroke="{col}" stroke-width="1.5"/>')
        if quivers and j in quivers:
            u = np.asarray(quivers[j])
            step = max(1, c.n // 32)
            ulen = 0.08 * span / max(float(np.max(np.hypot(u[:, 0], u[:, 1]))), 1e-300)
            for i in range(0, c.n, step):
                a = tx(c.nodes[i])
                b = tx(c.nodes[i] + ulen * u[i])
                out.append(f'<line x1="{a[0]:.3f}" y1="{a[1]:.3f}" x2="{b[0]:.3f}" y2="{b[1]:.3f}" '
                           f'stroke="{col}" stroke-width="0.8"/>')
    for x, y, text in labels:
        a = tx((x, y))
        out.append(f'<text x="{a[0]:.3f}" y="{a[1]:.3f}" font-size="12" text-anchor="middle">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
