import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curveorbits.densities import Augmentation, length_spectrum, pullback_by
from curveorbits.dipoles import DipoleLoop
from curveorbits.fields import (HamiltonianSpec, gaussian, hamiltonian_field, radial_field,
                                rotation_hamiltonian, zero_field)
from curveorbits.geometry import circle
from curveorbits.moments import (TangencyError, moment_dipole, moment_left, moment_reduced_level,
                                 moment_right, separating_hamiltonian, standard_battery)
from curveorbits.phase import CotangentPoint, flow_ambient, normal_covector_point, reparametrize

from helpers import random_point, random_psi, smooth_aug, star_curve


def test_moment_left_examples():
    rng = np.random.default_rng(0)
    p = random_point(rng, 64)
    assert moment_left(p, zero_field()) == 0.0
    c = circle(1.0, 512)
    q = normal_covector_point(c)
    assert moment_left(q, radial_field(cutoff=(2.0, 3.0))) == pytest.approx(2 * np.pi, abs=1e-6)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_moment_left_reparam_invariant(seed):
    rng = np.random.default_rng(seed)
    p = random_point(rng, 256)
    psi = random_psi(rng)
    q = reparametrize(p, psi)
    for h in standard_battery((-1.5, -1.5), (1.5, 1.5), (3, 3)):
        X = hamiltonian_field(h)
        assert moment_left(q, X) == pytest.approx(moment_left(p, X), abs=1e-8)


def test_moment_right_examples():
    c = circle(1.0, 256)
    assert np.max(np.abs(moment_right(normal_covector_point(c)).components[0])) < 1e-12
    rng = np.random.default_rng(1)
    p = random_point(rng, 256, diff="spectral")
    psi = random_psi(rng)
    lhs = moment_right(reparametrize(p, psi)).components[0]
    rhs = pullback_by(moment_right(p), psi).components[0]
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_moment_right_lengths_preserved_by_area_preserving_flow():
    rng = np.random.default_rng(2)
    p = random_point(rng, 256, diff="spectral")
    X = hamiltonian_field(gaussian((0.4, 0.2), 2.0, 0.7))
    q = flow_ambient(p, X, 0.5, dt=0.01)
    l0 = length_spectrum(moment_right(p)).lengths[0]
    l1 = length_spectrum(moment_right(q)).lengths[0]
    assert l1 == pytest.approx(l0, abs=1e-6)


def test_moment_reduced_level():
    c = circle(1.0, 256)
    v = c.velocity()
    t = v / np.hypot(v[:, 0], v[:, 1])[:, None]
    tangential = Augmentation.from_wc(0.7 * t)
    # radial field is normal to a centred circle
    res = moment_reduced_level(c, tangential, radial_field(cutoff=(2.0, 3.0)))
    assert abs(res.total) < 1e-12
    rng = np.random.default_rng(3)
    for _ in range(5):
        cc = star_curve(rng, 128)
        g = smooth_aug(rng, cc)
        X = hamiltonian_field(gaussian(rng.normal(size=2) * 0.5, 1.0, 0.8))
        r = moment_reduced_level(cc, g, X)
        assert abs(r.normal + r.tangential - r.total) < 1e-10
    # rotation field X = (y, -x) on the unit circle is -t; gamma = 0.7 t |dl| gives -2 pi * 0.7
    rot = hamiltonian_field(rotation_hamiltonian())
    r = moment_reduced_level(c, Augmentation.from_wc(0.7 * v), rot)
    assert r.total == pytest.approx(-2 * np.pi * 0.7, abs=1e-6)
    assert abs(r.normal) < 1e-12


def test_moment_dipole_examples():
    c = circle(1.0, 512)
    d = DipoleLoop(c, c.nodes.copy())
    assert moment_dipole(d, rotation_hamiltonian(cutoff=(2.0, 3.0))) == pytest.approx(2 * np.pi, abs=1e-6)
    flat = HamiltonianSpec("linear", gradient=(0.0, 0.0))
    assert moment_dipole(d, flat) == 0.0
    far = gaussian((20.0, 0.0), 1.0, 0.3)
    assert abs(moment_dipole(d, far)) < 1e-12


def test_moment_dipole_tangency_named():
    c = circle(1.0, 64)
    u = c.nodes.copy()
    v = c.velocity()
    u[5] = v[5]
    d = DipoleLoop(c, u, validate=False)
    with pytest.raises(TangencyError, match="node 5"):
        moment_dipole(d, gaussian((0.2, 0.0)))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000), shift=st.floats(-3.0, 3.0))
def test_dipole_class_invariance(seed, shift):
    rng = np.random.default_rng(seed)
    c = star_curve(rng, 256, diff="spectral")
    u = c.nodes * (1.0 + 0.2 * np.cos(2 * np.pi * c.s))[:, None]
    d = DipoleLoop(c, u)
    h = gaussian(rng.normal(size=2) * 0.5, rng.uniform(0.5, 3.0), rng.uniform(0.4, 1.0))
    assert moment_dipole(d.shifted_class(shift), h) == pytest.approx(moment_dipole(d, h), abs=1e-9)


def test_separating_hamiltonian():
    rng = np.random.default_rng(4)
    c = star_curve(rng, 128)
    p1 = CotangentPoint.of(c, smooth_aug(rng, c))
    p2 = CotangentPoint.of(c, smooth_aug(rng, c))
    battery = standard_battery((-1.5, -1.5), (1.5, 1.5))
    a = [moment_left(p1, hamiltonian_field(h)) for h in battery]
    b = [moment_left(p2, hamiltonian_field(h)) for h in battery]
    assert separating_hamiltonian(a, a) is None
    assert separating_hamiltonian(a, b) is not None
