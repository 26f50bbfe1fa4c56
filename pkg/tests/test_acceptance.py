"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (verdict lines appear in
the terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from curveorbits.densities import OneFormDensity, pullback_by
from curveorbits.dipoles import DipoleLoop, evolve, invariant_report
from curveorbits.dualpair import build_battery, enrichment_curve, hamiltonian_property_check
from curveorbits.fields import gaussian, hamiltonian_field
from curveorbits.geometry import CurveFamily, meridian, region_areas, torus
from curveorbits.leaves import codim_rank, leaf_invariants, moser_cylinder_flow, same_leaf
from curveorbits.moments import moment_dipole, moment_left, moment_right, standard_battery
from curveorbits.phase import reparametrize
from curveorbits.prequant import certificate, verify_generator_pairing
from curveorbits.scenes import load_shipped, shipped_names

from helpers import random_point, random_psi, star_curve, verdict

TESTS = Path(__file__).parent
TIMINGS = {}


@pytest.fixture(autouse=True)
def _timed(request):
    t0 = time.perf_counter()
    yield
    TIMINGS[request.node.name] = time.perf_counter() - t0


def test_criterion_01_nesting():
    t0 = time.perf_counter()
    scenes = {p: load_shipped(f"nesting_{p}") for p in ("left", "middle", "right")}
    inv = {p: leaf_invariants(sc.family) for p, sc in scenes.items()}
    lr = same_leaf(inv["left"], inv["right"])
    lm = same_leaf(inv["left"], inv["middle"])
    left = region_areas(scenes["left"].family).finite_areas()
    mid = region_areas(scenes["middle"].family).finite_areas()
    err = max(np.max(np.abs(np.array(left) - (8, 1, 4))), np.max(np.abs(np.array(mid) - (5, 4, 1))))
    elapsed = time.perf_counter() - t0
    ok = lr == "same" and lm == "different" and err <= 1e-3 and elapsed < 5.0
    verdict(1, ok, f"left~right={lr} left~middle={lm} area err={err:.2e} runtime={elapsed:.2f}s")
    assert ok


def _meridian_family(heights, rng, T):
    curves = []
    for h in heights:
        m, a = int(rng.integers(1, 4)), rng.uniform(-0.005, 0.005)
        curves.append(meridian(h, 32, T, lambda x, m=m, a=a: a * np.sin(2 * np.pi * m * x)))
    return CurveFamily(tuple(curves))


def test_criterion_02_torus_meridian_law():
    rng = np.random.default_rng(2024)
    T = torus()
    wrong = 0
    for i in range(200):
        k = int(rng.integers(2, 6))
        while True:
            h = np.sort(rng.uniform(0.0, 1.0, k))
            gaps = np.diff(np.concatenate([h, [h[0] + 1.0]]))
            if gaps.min() > 0.05:
                break
        t = rng.uniform(0.0, 1.0)
        h2 = np.mod(h + t, 1.0)
        same = i % 2 == 0
        if not same:
            # move one meridian: two adjacent gaps change, so no common shift exists
            j = int(rng.integers(k))
            h2[j] = np.mod(h2[j] + rng.choice([-1, 1]) * 10 ** rng.uniform(-7, -2), 1.0)
        a = leaf_invariants(_meridian_family(h, rng, T), "isovolume")
        b = leaf_invariants(_meridian_family(h2, rng, T), "isovolume")
        got = same_leaf(a, b, 1e-9)
        wrong += got != ("same" if same else "different")
    verdict(2, wrong == 0, f"200 instances, {wrong} misclassified")
    assert wrong == 0


def test_criterion_03_codimension():
    bad = []
    for name in shipped_names():
        sc = load_shipped(name)
        kind = sc.run.kind
        expected = sc.family.k - 1 if sc.ambient.is_torus and kind == "isovolume" else sc.family.k
        got = codim_rank(sc.family, kind)
        if got != expected:
            bad.append(f"{name}: {got} != {expected}")
    verdict(3, not bad, f"{len(shipped_names())} shipped scenes" + (f"; {bad}" if bad else ""))
    assert not bad


def _equivariance_residual(p, psi):
    lhs = moment_right(reparametrize(p, psi)).components[0]
    rhs = pullback_by(moment_right(p), psi).components[0]
    return float(np.max(np.abs(lhs - rhs)))


def test_criterion_04_moment_invariance():
    battery = standard_battery((-1.5, -1.5), (1.5, 1.5), (4, 4))
    fields = [hamiltonian_field(h) for h in battery]
    jl, jr, jr_fd4 = 0.0, 0.0, 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        p = random_point(rng, 512, diff="spectral")
        psi = random_psi(rng)
        q = reparametrize(p, psi)
        jl = max(jl, max(abs(moment_left(q, X) - moment_left(p, X)) for X in fields))
        jr = max(jr, _equivariance_residual(p, psi))
    # convergence order of the default (fd4) discretisation
    ns = np.array([64, 128, 256, 512])
    orders = []
    for seed in range(3):
        errs = []
        for n in ns:
            rng = np.random.default_rng(seed)
            p = random_point(rng, int(n))
            errs.append(_equivariance_residual(p, random_psi(rng)))
        jr_fd4 = max(jr_fd4, errs[-1])
        orders.append(-np.polyfit(np.log2(ns), np.log2(errs), 1)[0])
    ok = jl <= 1e-8 and jr <= 1e-8 and min(orders) >= 3.5
    verdict(4, ok, f"J_L {jl:.1e}, J_R {jr:.1e} (spectral, N=512, 50 pairs); fd4 order {min(orders):.2f}, "
                   f"fd4 J_R at N=512 {jr_fd4:.1e}")
    assert ok


def test_criterion_05_dipole_class_invariance():
    worst = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        c = star_curve(rng, 256, diff="spectral")
        u = c.nodes * (1.0 + 0.2 * np.cos(2 * np.pi * c.s + rng.uniform(0, 6)))[:, None]
        d = DipoleLoop(c, u)
        shift = rng.uniform(-3, 3)
        h = gaussian(rng.normal(size=2) * 0.5, rng.uniform(0.5, 5.0), rng.uniform(0.3, 1.0))
        worst = max(worst, abs(moment_dipole(d.shifted_class(shift), h) - moment_dipole(d, h)))
    verdict(5, worst <= 1e-9, f"max change {worst:.1e} over 50 triples")
    assert worst <= 1e-9


def test_criterion_06_moser():
    x = np.arange(256) / 256
    _, rep = moser_cylinder_flow(0.3 * np.sin(2 * np.pi * x), 64, 1e-3)
    ok = rep.max_endpoint_error <= 1e-8 and rep.max_divergence <= 1e-10
    verdict(6, ok, f"endpoint err {rep.max_endpoint_error:.1e}, max|div Z| {rep.max_divergence:.1e}")
    assert ok


def test_criterion_07_conservation():
    sc = load_shipped("standard_dipole")
    d, h = sc.dipole_loops()[0], sc.hamiltonians[0]
    r1 = invariant_report(evolve(d, h, 1.0, 1e-3))
    r2 = invariant_report(evolve(d, h, 1.0, 5e-4))
    ratio = r1.max() / r2.max()
    ok = r1.max() <= 1e-6 and ratio >= 12
    verdict(7, ok, f"drift a {r1.area:.1e} l {r1.length:.1e} J {r1.moment:.1e}; halving ratio {ratio:.1f}")
    assert ok


def test_criterion_08_prequantization():
    rng = np.random.default_rng(8)
    failures = 0
    for _ in range(1000):
        lsq = rng.integers(1, 10**6 + 1, size=int(rng.integers(1, 7))).tolist()
        failures += not certificate(lsq).check()
    s = np.arange(256) / 256
    dens = [OneFormDensity.single((1 + 0.3 * np.sin(2 * np.pi * s)) ** 2),
            OneFormDensity(((2 * (1 + 0.2 * np.cos(2 * np.pi * s))) ** 2, np.full(256, 9.0))),
            OneFormDensity.single(-(1.7 * (1 + 0.4 * np.cos(4 * np.pi * s + 1.0))) ** 2)]
    pair = max(verify_generator_pairing(r).max_residual for r in dens)
    ok = failures == 0 and pair <= 1e-10
    verdict(8, ok, f"{failures} certificate failures in 1000; max pairing residual {pair:.1e}")
    assert ok


def test_criterion_09_dual_pair_lab():
    p = load_shipped("unit_circle").point()
    bat = build_battery(p)
    hc = hamiltonian_property_check(p, bat)
    fine = hamiltonian_property_check(p, bat, steps=(1e-4,)).fd_residuals[0]
    means = [r.mean_angle for r in enrichment_curve(p)]
    mono = all(b <= 1.05 * a for a, b in zip(means, means[1:]))
    ok = hc.theta_residual <= 1e-6 and fine <= 1e-6 and min(hc.ratios) >= 3.0 and mono
    verdict(9, ok, f"residual {fine:.1e} at h=1e-4, FD ratios {', '.join(f'{r:.2f}' for r in hc.ratios)}; "
                   f"mean angles {', '.join(f'{m:.3f}' for m in means)}")
    assert ok


def test_criterion_10_runtime():
    """The rest of the suite in a fresh process plus criteria 1-9 above."""
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(TESTS),
                    "--ignore", str(TESTS / "test_acceptance.py")], check=True, capture_output=True)
    others = time.perf_counter() - t0
    own = sum(v for k, v in TIMINGS.items() if k.startswith("test_criterion_0"))
    total = others + own
    verdict(10, total <= 120.0, f"suite runtime {total:.1f}s (other tests {others:.1f}s, criteria 1-9 {own:.1f}s)")
    assert total <= 120.0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
