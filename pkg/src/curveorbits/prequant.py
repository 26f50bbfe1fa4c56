"""Integer certificates for prequantizable isodrastic leaves and the generator pairings.

If every squared component length ``l_i^2`` is an integer, write
``l_i^2 = n m_i`` with ``n = gcd`` and pick Bezout coefficients
``sum m_i n_i = 1``.  The tool only certifies this sufficient condition;
failing it is reported as "hypothesis not satisfied", never as a negative
answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from . import _periodic
from .densities import DensityError, OneFormDensity, volume_form

INTEGER_ATOL = 1e-6


class HypothesisNotSatisfied(ValueError):
    pass


def xgcd(a: int, b: int):
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b)``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class PrequantCertificate:
    lsq: tuple
    n: int
    m: tuple
    bezout: tuple

    def check(self) -> bool:
        """Exact integer identities: ``n m_i = l_i^2``, ``gcd(m) = 1``, ``sum m_i n_i = 1``."""
        return (all(self.n * mi == li for mi, li in zip(self.m, self.lsq))
                and reduce(math.gcd, self.m) == 1
                and sum(mi * ni for mi, ni in zip(self.m, self.bezout)) == 1)


def certificate(lsq: Sequence[int]) -> PrequantCertificate:
    lsq = tuple(int(v) for v in lsq)
    if not lsq:
        raise ValueError("need at least one squared length")
    if any(v < 1 for v in lsq):
        raise ValueError("squared lengths must be positive integers")
    n = reduce(math.gcd, lsq)
    m = tuple(v // n for v in lsq)
    g, coef = m[0], [1]
    for mi in m[1:]:
        if g == 1:
            # already a unit combination; later components get coefficient 0
            coef.append(0)
            continue
        g, x, y = xgcd(g, mi)
        coef = [c * x for c in coef] + [y]
    return PrequantCertificate(lsq, n, m, tuple(coef))


def squared_lengths(rho: OneFormDensity) -> np.ndarray:
    rho.check_nowhere_zero()
    return np.array([float(_periodic.trapz(np.sqrt(np.abs(r)))) ** 2 for r in rho.components])


def certificate_for_density(rho: OneFormDensity, atol: float = INTEGER_ATOL) -> PrequantCertificate:
    """Certificate from computed ``l_i^2``; refuses values more than ``atol`` from an integer."""
    lsq = squared_lengths(rho)
    rounded = np.rint(lsq)
    for j, (v, r) in enumerate(zip(lsq, rounded)):
        if abs(v - r) > atol or r < 1:
            raise HypothesisNotSatisfied(
                f"hypothesis not satisfied: l^2 = {v:.9g} for component {j} is not a positive integer")
    return certificate([int(r) for r in rounded])


@dataclass(frozen=True)
class PairingReport:
    lengths: tuple
    pairings: tuple
    residuals: tuple
    certificate: Optional[PrequantCertificate] = None
    normalized: tuple = ()
    combined: Optional[float] = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def generator_fields(rho: OneFormDensity):
    """``Y_i = l_i / v_i``: the unit-speed generator of each component (``rho``-length ``l_i``)."""
    out = []
    for r in rho.components:
        v = volume_form(r)
        l = float(_periodic.trapz(np.abs(v)))
        out.append(l / v)
    return out


def verify_generator_pairing(rho: OneFormDensity, atol: float = INTEGER_ATOL) -> PairingReport:
    """Evaluate ``int i_{Y_i} rho = int |v| v Y_i ds`` against ``l_i^2``.

    When the squared lengths pass the integer test, the certificate is
    attached together with ``(1/n) int i_{Y_i / m_i} rho`` per component and
    the combined pairing ``(1/n) sum n_i int i_{Y_i} rho`` (both should be 1).
    """
    rho.check_nowhere_zero()
    lengths, pairings = [], []
    for r, Y in zip(rho.components, generator_fields(rho)):
        v = volume_form(r)
        lengths.append(float(_periodic.trapz(np.abs(v))))
        pairings.append(float(_periodic.trapz(np.abs(v) * v * Y)))
    residuals = tuple(abs(p - l * l) for p, l in zip(pairings, lengths))
    try:
        cert = certificate_for_density(rho, atol)
    except HypothesisNotSatisfied:
        return PairingReport(tuple(lengths), tuple(pairings), residuals)
    normalized = tuple(p / mi / cert.n for p, mi in zip(pairings, cert.m))
    combined = sum(ni * p for ni, p in zip(cert.bezout, pairings)) / cert.n
    return PairingReport(tuple(lengths), tuple(pairings), residuals, cert, normalized, combined)


__all__ = ["xgcd", "certificate", "certificate_for_density", "PrequantCertificate",
           "verify_generator_pairing", "PairingReport", "HypothesisNotSatisfied", "DensityError"]
