"""Random smooth scenes shared by the test modules."""

import numpy as np

from curveorbits.densities import Augmentation, Reparametrization
from curveorbits.geometry import DiscreteCurve
from curveorbits.phase import CotangentPoint


def star_curve(rng, n=256, modes=3, amp=0.08, center=(0.0, 0.0), scale=1.0, diff="fd4"):
    """Radially perturbed circle ``r = 1 + sum a_j cos((j+2) t + p_j)``."""
    a = rng.normal(size=modes) * amp
    ph = rng.uniform(0, 2 * np.pi, modes)
    th = 2 * np.pi * np.arange(n) / n
    r = 1 + sum(a[j] * np.cos((j + 2) * th + ph[j]) for j in range(modes))
    nodes = scale * np.column_stack([r * np.cos(th), r * np.sin(th)]) + np.asarray(center)
    return DiscreteCurve(nodes, diff=diff)


def smooth_aug(rng, curve, normal=0.5):
    """Augmentation with tangential part bounded away from zero plus a normal part."""
    th = 2 * np.pi * curve.s
    v = curve.velocity()
    sp = np.hypot(v[:, 0], v[:, 1])
    t = v / sp[:, None]
    nrm = np.column_stack([t[:, 1], -t[:, 0]])
    a = 1 + 0.3 * np.cos(th + rng.uniform(0, 2 * np.pi))
    b = normal * rng.normal() * np.sin(2 * th + rng.uniform(0, 2 * np.pi))
    w = 1.0 + 0.2 * np.sin(th)
    return Augmentation(w, a[:, None] * t + b[:, None] * nrm)


def random_point(rng, n=256, diff="fd4"):
    c = star_curve(rng, n, diff=diff)
    return CotangentPoint.of(c, smooth_aug(rng, c))


def random_psi(rng, strength=0.2):
    return Reparametrization.random(rng, modes=2, strength=strength)


# acceptance verdict lines, printed in the terminal summary by conftest
ACCEPTANCE = []


def verdict(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok
