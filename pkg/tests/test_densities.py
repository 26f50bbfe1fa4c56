import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curveorbits.densities import (Augmentation, DensityError, OneFormDensity, Reparametrization,
                                   epsilon_section, length_spectrum, orbit_type_equal, pullback_by,
                                   pullback_density)
from curveorbits.fields import gaussian, hamiltonian_field
from curveorbits.geometry import circle
from curveorbits.moments import moment_left
from curveorbits.phase import CotangentPoint, moment_right_density, reparametrize

from helpers import random_psi, smooth_aug, star_curve

S256 = np.arange(256) / 256


def test_length_examples():
    assert length_spectrum(OneFormDensity.single(np.ones(64))).lengths == (1.0,)
    assert length_spectrum(OneFormDensity.single(np.full(64, 4.0))).lengths == (2.0,)
    r = (1 + 0.5 * np.sin(2 * np.pi * S256)) ** 2
    assert abs(length_spectrum(OneFormDensity.single(r)).lengths[0] - 1.0) < 1e-10


def test_vanishing_density_named():
    r = np.ones(32)
    r[7] = 0.0
    with pytest.raises(DensityError, match="node 7"):
        length_spectrum(OneFormDensity.single(r))


def test_pullback_examples():
    c = circle(1.0, 256)
    v = c.velocity()
    normal = np.column_stack([v[:, 1], -v[:, 0]])
    assert np.max(np.abs(pullback_density(c, Augmentation(np.ones(256), normal)))) < 1e-12
    cov = 0.7 * np.column_stack([-np.sin(2 * np.pi * c.s), np.cos(2 * np.pi * c.s)])
    r = pullback_density(c, Augmentation(np.ones(256), cov))
    # fd4 derivative of a unit circle at N=256: relative error (2 pi / N)^4 / 30
    assert np.max(np.abs(r - 2 * np.pi * 0.7)) < 2 * np.pi * 0.7 * (2 * np.pi / 256) ** 4 / 25


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_pullback_equivariance(seed):
    rng = np.random.default_rng(seed)
    c = star_curve(rng, 256, diff="spectral")
    p = CotangentPoint.of(c, smooth_aug(rng, c))
    psi = random_psi(rng)
    lhs = moment_right_density(reparametrize(p, psi)).components[0]
    rhs = pullback_by(moment_right_density(p), psi).components[0]
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_pullback_linear():
    rng = np.random.default_rng(3)
    c = star_curve(rng, 128)
    a1, a2 = smooth_aug(rng, c), smooth_aug(rng, c)
    lhs = pullback_density(c, Augmentation.from_wc(2.0 * a1.wc - 0.5 * a2.wc))
    rhs = 2.0 * pullback_density(c, a1) - 0.5 * pullback_density(c, a2)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def _density(lengths, n=128, wiggle=0.0):
    s = np.arange(n) / n
    return OneFormDensity(tuple((l * (1 + wiggle * np.sin(2 * np.pi * s))) ** 2 for l in lengths))


def test_orbit_type_examples():
    rho = _density((1.0, 2.0), wiggle=0.3)
    assert orbit_type_equal(rho, rho)
    assert orbit_type_equal(_density((1.0, 2.0)), _density((2.0, 1.0), wiggle=0.4))
    assert not orbit_type_equal(_density((1.0, 2.0)), _density((1.0, 3.0)))
    with pytest.raises(DensityError):
        orbit_type_equal(_density((1.0,)), _density((1.0, 1.0)))


@settings(max_examples=30, deadline=None)
@given(l1=st.floats(0.5, 3.0), l2=st.floats(0.5, 3.0), eps=st.floats(-4e-10, 4e-10), wiggle=st.floats(0, 0.5))
def test_orbit_type_relation(l1, l2, eps, wiggle):
    a = _density((l1, l2))
    b = _density((l2 + eps, l1), wiggle=wiggle)
    c = _density((l1 - eps, l2 + eps))
    assert orbit_type_equal(a, b) and orbit_type_equal(b, a)
    assert orbit_type_equal(a, c) and orbit_type_equal(b, c)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_length_reparam_invariant(seed):
    rng = np.random.default_rng(seed)
    s = np.arange(256) / 256
    r = (1.5 + 0.4 * np.cos(2 * np.pi * s + rng.uniform(0, 6))) ** 2 * np.sign(rng.normal())
    rho = OneFormDensity.single(r)
    psi = random_psi(rng, 0.3)
    l0 = length_spectrum(rho).lengths[0]
    assert abs(length_spectrum(pullback_by(rho, psi)).lengths[0] - l0) < 1e-8


def test_epsilon_section():
    c = circle(1.0, 256)
    eps = epsilon_section(c)
    assert np.max(np.abs(pullback_density(c, eps))) < 1e-12
    # CCW circle: i_t mu is the inward unit conormal
    assert np.allclose(eps.c, -c.nodes, atol=1e-6)
    lam = 1 + 0.3 * np.cos(2 * np.pi * c.s)
    scaled = epsilon_section(c, lam)
    assert np.max(np.abs(scaled.wc - eps.wc)) < 1e-12
    assert np.max(np.abs(scaled.w - eps.w)) < 1e-12


def test_epsilon_pairs_to_zero_with_hamiltonians():
    rng = np.random.default_rng(0)
    c = star_curve(rng, 256, diff="spectral")
    p = CotangentPoint.of(c, epsilon_section(c))
    for _ in range(20):
        h = gaussian(rng.normal(size=2) * 0.8, rng.uniform(0.5, 2.0), rng.uniform(0.3, 1.2))
        assert abs(moment_left(p, hamiltonian_field(h))) < 1e-10
