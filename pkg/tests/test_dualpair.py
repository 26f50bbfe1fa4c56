import numpy as np
import pytest

from curveorbits.dualpair import (BatteryError, DirectionBattery, build_battery, bracket_residual,
                                  complement_residual, enrichment_curve, expected_codimension,
                                  fourier_modes, hamiltonian_property_check, principal_angles)
from curveorbits.fields import ZERO_HAMILTONIAN
from curveorbits.geometry import circle, meridian, torus
from curveorbits.scenes import load_shipped


@pytest.fixture(scope="module")
def base():
    return load_shipped("unit_circle").point()


def test_zero_generator(base):
    bat = DirectionBattery(base, [np.zeros(base.size)], [ZERO_HAMILTONIAN])
    hc = hamiltonian_property_check(base, bat)
    assert hc.theta_residual == 0.0 and max(hc.fd_residuals) == 0.0


def test_hamiltonian_property(base):
    bat = build_battery(base)
    assert bat.ZR.shape[1] == 17 and bat.ZL.shape[1] == 28
    hc = hamiltonian_property_check(base, bat)
    assert hc.theta_residual <= 1e-10
    assert all(r >= 3.0 for r in hc.ratios) and len(hc.ratios) == 2
    fine = hamiltonian_property_check(base, bat, steps=(1e-4,))
    assert fine.fd_residuals[0] <= 1e-6


def test_battery_rank_deficiency(base):
    with pytest.raises(BatteryError, match="rank-deficient"):
        build_battery(base, J=base.size)


def test_bracket_identity(base):
    assert bracket_residual(base) <= 1e-6


def test_principal_angles():
    A = np.eye(4)[:, :2]
    assert np.allclose(principal_angles(A, A), 0.0)
    assert np.allclose(principal_angles(A, np.eye(4)[:, 2:]), np.pi / 2)
    B = np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 1.0]]).T
    assert np.allclose(principal_angles(A, B), [0.0, np.pi / 4])


def test_enrichment_monotone_and_codim(base):
    curve = enrichment_curve(base)
    means = [r.mean_angle for r in curve]
    assert all(b <= 1.05 * a for a, b in zip(means, means[1:]))
    assert means[-1] < means[0]
    assert all(r.codim_ok and r.flux_rank == 1 for r in curve)


def test_expected_codimension():
    assert expected_codimension([circle(1.0, 16), circle(0.5, 16, center=(4, 0))], "isodrastic") == 2
    T = torus()
    mer = [meridian(h, 16, T) for h in (0.1, 0.4, 0.8)]
    assert expected_codimension(mer, "isovolume") == 2
    assert expected_codimension(mer, "isodrastic") == 3


def test_complement_rejects_outside_open_set():
    from curveorbits.phase import normal_covector_point
    p = normal_covector_point(circle(1.0, 64))
    bat = DirectionBattery(p, fourier_modes(1, 64), [ZERO_HAMILTONIAN])
    with pytest.raises(ValueError, match="open set"):
        complement_residual(p, bat)
