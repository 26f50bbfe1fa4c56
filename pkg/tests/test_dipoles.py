import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curveorbits.densities import Augmentation
from curveorbits.dipoles import (DipoleLoop, NotInOpenSetError, TrajectoryRecord, evolve, gamma_from_u,
                                 invariant_report, side_classify, u_from_gamma)
from curveorbits.fields import ZERO_HAMILTONIAN, gaussian, rotation_hamiltonian
from curveorbits.geometry import circle
from curveorbits.moments import TangencyError
from curveorbits.scenes import load_shipped

from helpers import star_curve


def _frame(c):
    v = c.velocity()
    t = v / np.hypot(v[:, 0], v[:, 1])[:, None]
    return t, np.column_stack([t[:, 1], -t[:, 0]])


def test_gamma_u_examples():
    c = circle(1.0, 128)
    t, n = _frame(c)
    g = gamma_from_u(c, n)
    assert np.allclose(g.w, 2 * np.pi) and np.allclose(g.c, t, atol=1e-12)
    assert np.max(np.abs(u_from_gamma(c, g).u - n)) < 1e-12
    # doubling the induced length multiplies r by 4, so u scales by 4
    d4 = u_from_gamma(c, Augmentation(4 * g.w, 4 * g.c))
    assert np.allclose(d4.r, 4 * DipoleLoop(c, n).r)
    assert np.allclose(d4.u, 4 * n)
    assert DipoleLoop(c, 4 * n).length == pytest.approx(2 * DipoleLoop(c, n).length)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_gamma_u_round_trip(seed):
    rng = np.random.default_rng(seed)
    c = star_curve(rng, 128)
    t, n = _frame(c)
    a = 1 + 0.4 * np.cos(2 * np.pi * c.s + rng.uniform(0, 6))
    b = rng.normal() * np.sin(4 * np.pi * c.s)
    sign = rng.choice([-1.0, 1.0])
    u = sign * a[:, None] * n + b[:, None] * t
    assert np.max(np.abs(u_from_gamma(c, gamma_from_u(c, u)).u - u)) < 1e-10


def test_u_from_gamma_outside_open_set():
    c = circle(1.0, 64)
    t, n = _frame(c)
    wc = t.copy()
    wc[9] = n[9]
    with pytest.raises(NotInOpenSetError, match="node 9"):
        u_from_gamma(c, Augmentation.from_wc(wc))


def test_side_classify_examples():
    c = circle(1.0, 64)
    t, n = _frame(c)
    assert side_classify(DipoleLoop(c, n)) == "outward"
    assert side_classify(DipoleLoop(c, -n)) == "inward"
    assert side_classify(DipoleLoop(c, n + 0.5 * t)) == "outward"
    cw = circle(1.0, 64, clockwise=True)
    assert side_classify(DipoleLoop(cw, cw.nodes)) == "outward"


def test_tangent_field_rejected():
    c = circle(1.0, 64)
    t, _ = _frame(c)
    with pytest.raises(TangencyError, match="tangency violation at node 0"):
        DipoleLoop(c, t)


def test_evolve_zero_hamiltonian_is_identity():
    d = load_shipped("standard_dipole").dipole_loops()[0]
    tr = evolve(d, ZERO_HAMILTONIAN, 0.1, 0.01)
    assert np.array_equal(tr.curves[-1].nodes, d.curve.nodes)
    assert invariant_report(tr).max() == 0.0


def test_evolve_rigid_rotation():
    c = circle(0.5, 128, diff="spectral")
    t, n = _frame(c)
    d = DipoleLoop(c, n + 0.3 * t)
    tr = evolve(d, rotation_hamiltonian(), 1.0, 1e-2)
    assert invariant_report(tr).max() <= 1e-10
    # the time-1 flow is a clockwise rotation by one radian
    R = np.array([[np.cos(1.0), np.sin(1.0)], [-np.sin(1.0), np.cos(1.0)]])
    assert np.max(np.abs(tr.curves[-1].nodes - c.nodes @ R.T)) < 1e-9
    assert np.max(np.abs(tr.us[-1] - d.u @ R.T)) < 1e-9


def test_standard_scene_drift_and_order():
    sc = load_shipped("standard_dipole")
    d = sc.dipole_loops()[0]
    h = sc.hamiltonians[0]
    r1 = invariant_report(evolve(d, h, 1.0, 1e-3))
    r2 = invariant_report(evolve(d, h, 1.0, 5e-4))
    assert r1.area <= 1e-6 and r1.length <= 1e-6 and r1.moment <= 1e-6
    assert r1.max() / r2.max() >= 12


def test_evolve_sampling_and_abort():
    d = load_shipped("standard_dipole").dipole_loops()[0]
    tr = evolve(d, gaussian((0.6, 0.3), 10.0, 0.5), 0.05, 1e-3, sample_every=10)
    assert tr.times == pytest.approx([0.0, 0.01, 0.02, 0.03, 0.04, 0.05])
    # u nearly tangent: a shear drives it onto the tangent line and the run aborts
    c = circle(1.0, 64)
    t, n = _frame(c)
    with pytest.raises(TangencyError) as info:
        evolve(DipoleLoop(c, t + 1e-3 * n), gaussian((1.0, 0.0), 50.0, 0.3), 1.0, 1e-3)
    assert isinstance(info.value.record, TrajectoryRecord) and info.value.record.aborted
    with pytest.raises(ValueError):
        evolve(d, ZERO_HAMILTONIAN, 1.0, 0.0)
