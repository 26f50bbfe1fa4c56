import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curveorbits.densities import DensityError, OneFormDensity
from curveorbits.prequant import (HypothesisNotSatisfied, certificate, certificate_for_density,
                                  generator_fields, verify_generator_pairing, xgcd)

S = np.arange(256) / 256


@given(a=st.integers(0, 10**6), b=st.integers(0, 10**6))
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert g == math.gcd(a, b) and a * x + b * y == g


def test_certificate_examples():
    c = certificate([1])
    assert (c.n, c.m, c.bezout) == (1, (1,), (1,))
    c = certificate([4, 6, 10])
    assert c.n == 2 and c.m == (2, 3, 5) and c.check()
    assert sum(m * b for m, b in zip(c.m, c.bezout)) == 1
    c = certificate([9, 9])
    assert c.n == 9 and c.m == (1, 1) and c.bezout == (1, 0)
    with pytest.raises(ValueError):
        certificate([])
    with pytest.raises(ValueError):
        certificate([3, 0])


@settings(max_examples=200)
@given(lsq=st.lists(st.integers(1, 10**6), min_size=1, max_size=6))
def test_certificate_identities(lsq):
    c = certificate(lsq)
    assert c.check()
    assert all(c.n * m == l for m, l in zip(c.m, lsq))
    assert reduce(math.gcd, c.m) == 1


def test_certificate_check_detects_tampering():
    c = certificate([4, 6, 10])
    bad = type(c)(c.lsq, c.n, c.m, (c.bezout[0] + 1,) + c.bezout[1:])
    assert not bad.check()


def test_generator_pairing_examples():
    rep = verify_generator_pairing(OneFormDensity.single(np.ones(64)))
    assert np.allclose(generator_fields(OneFormDensity.single(np.ones(64)))[0], 1.0)
    assert rep.pairings[0] == pytest.approx(1.0, abs=1e-14)
    rep = verify_generator_pairing(OneFormDensity.single((1 + 0.3 * np.sin(2 * np.pi * S)) ** 2))
    assert rep.max_residual <= 1e-10
    assert rep.pairings[0] == pytest.approx(1.0, abs=1e-10)
    two = OneFormDensity(((2 * (1 + 0.2 * np.cos(2 * np.pi * S))) ** 2, np.full(256, 9.0)))
    rep = verify_generator_pairing(two)
    assert np.allclose(rep.pairings, (4, 9), atol=1e-10)
    assert rep.certificate.n == 1
    assert rep.combined == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(l=st.floats(0.3, 5.0), amp=st.floats(0.0, 0.6), phase=st.floats(0, 6.3), sign=st.sampled_from([-1.0, 1.0]))
def test_pairing_identity_on_analytic_densities(l, amp, phase, sign):
    r = sign * (l * (1 + amp * np.cos(2 * np.pi * S + phase))) ** 2
    rep = verify_generator_pairing(OneFormDensity.single(r))
    assert rep.lengths[0] == pytest.approx(l, abs=1e-12)
    assert abs(rep.pairings[0] - sign * l * l) <= 1e-10 or rep.residuals[0] <= 1e-10


def test_refusals():
    rho = OneFormDensity.single(np.full(64, 2.0))  # l^2 = 2 exactly -> certified
    assert certificate_for_density(rho).lsq == (2,)
    with pytest.raises(HypothesisNotSatisfied, match="hypothesis not satisfied"):
        certificate_for_density(OneFormDensity.single(np.full(64, 1.5)))
    assert verify_generator_pairing(OneFormDensity.single(np.full(64, 1.5))).certificate is None
    r = np.ones(64)
    r[3] = 0.0
    with pytest.raises(DensityError, match="node 3"):
        verify_generator_pairing(OneFormDensity.single(r))
