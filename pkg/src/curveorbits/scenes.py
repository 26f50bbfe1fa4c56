"""Builders for the scenes shipped with the package, and access to their JSON files.

``python3 -m curveorbits.scenes`` regenerates ``curveorbits/data/*.json``.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .geometry import circle

DATA_PACKAGE = "curveorbits.data"


def _radius(area):
    return math.sqrt(area / math.pi)


def _circle(area, center, n):
    return {"shape": "circle", "center": list(center), "radius": _radius(area), "n": n}


def _ellipse(area, aspect, center, n):
    a = math.sqrt(area * aspect / math.pi)
    return {"shape": "ellipse", "center": list(center), "a": a, "b": area / (math.pi * a), "n": n}


def nesting_panel(panel: str, n: int = 2048) -> dict:
    """Three plane curves enclosing areas 1, 9 and 4.

    left: the 1-curve inside the 9-curve, the 4-curve apart.  middle: the
    4-curve inside the 9-curve, the 1-curve apart.  right: the left panel
    moved by an area-preserving deformation (ellipses, shifted).
    """
    if panel == "left":
        curves = [_circle(9.0, (0.0, 0.0), n), _circle(1.0, (0.6, 0.4), n), _circle(4.0, (4.5, 0.0), n)]
    elif panel == "middle":
        curves = [_circle(9.0, (0.0, 0.0), n), _circle(4.0, (0.4, -0.3), n), _circle(1.0, (4.0, 0.5), n)]
    elif panel == "right":
        curves = [_ellipse(9.0, 1.8, (0.0, 0.5), n), _ellipse(1.0, 0.6, (-1.2, 0.6), n),
                  _ellipse(4.0, 2.5, (1.5, -3.6), n)]
    else:
        raise ValueError(f"unknown panel {panel!r}")
    return {"name": f"nesting-{panel}", "ambient": {"type": "plane"}, "curves": curves,
            "run": {"kind": "isodrastic"}}


def torus_meridians(heights=(0.1, 0.35, 0.7), n: int = 64, kind: str = "isovolume") -> dict:
    curves = [{"shape": "meridian", "height": h, "n": n} for h in heights]
    return {"name": f"torus-meridians-{len(heights)}", "ambient": {"type": "torus", "moduli": [1.0, 1.0]},
            "curves": curves, "run": {"kind": kind}}


def plane_circles(k: int, n: int = 256) -> dict:
    """``k`` disjoint circles; odd-indexed ones nest inside the previous one."""
    curves = []
    for j in range(k):
        if j % 2 == 0:
            curves.append({"shape": "circle", "center": [4.0 * j, 0.0], "radius": 1.5, "n": n})
        else:
            curves.append({"shape": "circle", "center": [4.0 * (j - 1) + 0.2, 0.1], "radius": 0.6, "n": n})
    return {"name": f"plane-circles-{k}", "ambient": {"type": "plane"}, "curves": curves,
            "run": {"kind": "isodrastic"}}


def lab_augmentation(n: int):
    """Augmentation on the unit circle with nowhere-zero pullback and a normal part."""
    c = circle(1.0, n)
    s = c.s
    t = np.column_stack([-np.sin(2 * np.pi * s), np.cos(2 * np.pi * s)])
    nrm = np.column_stack([np.cos(2 * np.pi * s), np.sin(2 * np.pi * s)])
    cov = (1 + 0.3 * np.cos(2 * np.pi * s))[:, None] * t + 0.5 * np.sin(4 * np.pi * s)[:, None] * nrm
    return np.full(n, 2 * np.pi), cov


def unit_circle(n: int = 128) -> dict:
    """Unit circle carrying an augmentation and a length-1 density ``(1 + 0.3 sin 2 pi s)^2``."""
    w, cov = lab_augmentation(n)
    s = np.arange(n) / n
    dens = (1 + 0.3 * np.sin(2 * np.pi * s)) ** 2
    return {"name": "unit-circle", "ambient": {"type": "plane"},
            "curves": [{"shape": "circle", "center": [0.0, 0.0], "radius": 1.0, "n": n, "diff": "spectral"}],
            "augmentations": [{"curve": 0, "w": w.tolist(), "c": cov.tolist()}],
            "densities": [{"curve": 0, "values": dens.tolist(), "nowhere_zero": True}],
            "run": {"seed": 0, "kind": "isodrastic"}}


STANDARD_GAUSSIAN = {"type": "gaussian", "center": [0.6, 0.3], "amp": 10.0, "sigma": 0.5}


def standard_dipole(n: int = 256) -> dict:
    """Circle of radius 1/2 with ``u`` = outward normal + 0.3 tangent, driven by an offset Gaussian."""
    c = circle(0.5, n, diff="spectral")
    s = c.s
    nrm = np.column_stack([np.cos(2 * np.pi * s), np.sin(2 * np.pi * s)])
    tan = np.column_stack([-np.sin(2 * np.pi * s), np.cos(2 * np.pi * s)])
    u = nrm + 0.3 * tan
    return {"name": "standard-dipole", "ambient": {"type": "plane"},
            "curves": [{"shape": "circle", "center": [0.0, 0.0], "radius": 0.5, "n": n, "diff": "spectral"}],
            "dipoles": [{"curve": 0, "u": u.tolist()}],
            "hamiltonians": [dict(STANDARD_GAUSSIAN)],
            "run": {"seed": 0, "dt": 1e-3, "T": 1.0, "tol": 1e-6}}


def moser_scene() -> dict:
    return {"name": "moser-sine", "ambient": {"type": "plane"},
            "curves": [{"shape": "circle", "center": [0.0, 0.0], "radius": 1.0, "n": 64}],
            "graph": {"n": 256, "modes": [[1, 0.0, 0.3]]}, "run": {"tol": 1e-8}}


def prequant_scene() -> dict:
    """Two circles whose densities have lengths 2 and 3."""
    n = 256
    s = np.arange(n) / n
    r1 = (2 * (1 + 0.2 * np.cos(2 * np.pi * s))) ** 2
    r2 = np.full(n, 9.0)
    return {"name": "prequant-two", "ambient": {"type": "plane"},
            "curves": [{"shape": "circle", "center": [0.0, 0.0], "radius": 1.0, "n": n},
                       {"shape": "circle", "center": [3.0, 0.0], "radius": 1.0, "n": n}],
            "densities": [{"curve": 0, "values": r1.tolist(), "nowhere_zero": True},
                          {"curve": 1, "values": r2.tolist(), "nowhere_zero": True}],
            "lsq": [4, 9]}


def shipped() -> dict:
    out = {f"nesting_{p}": nesting_panel(p) for p in ("left", "middle", "right")}
    out["torus_meridians"] = torus_meridians()
    for k in range(1, 5):
        out[f"plane_circles_{k}"] = plane_circles(k)
    out["unit_circle"] = unit_circle()
    out["standard_dipole"] = standard_dipole()
    out["moser_sine"] = moser_scene()
    out["prequant_two"] = prequant_scene()
    return out


def scene_path(name: str):
    """Path of a shipped scene file, e.g. ``scene_path("nesting_left")``."""
    return resources.files(DATA_PACKAGE).joinpath(f"{name}.json")


def shipped_names():
    return sorted(p.name[:-5] for p in resources.files(DATA_PACKAGE).iterdir() if p.name.endswith(".json"))


def load_shipped(name: str):
    from .scene_io import parse_scene
    return parse_scene(scene_path(name).read_text(encoding="utf-8"))


def write_all(directory=None):
    directory = Path(directory) if directory else Path(__file__).parent / "data"
    directory.mkdir(parents=True, exist_ok=True)
    for name, doc in shipped().items():
        (directory / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    return directory


if __name__ == "__main__":
    print(write_all())
