"""Periodic grid helpers: differentiation, interpolation and antiderivatives.

All routines assume samples ``f[i] = f(i / N)`` of a 1-periodic function on
the uniform grid ``s_i = i / N``.  The leading axis is the grid axis; any
trailing axes are carried along.
"""

import numpy as np

DIFF_METHODS = ("fd4", "spectral")


def _wavenumbers(n):
    k = np.fft.fftfreq(n, d=1.0 / n)
    return k


def diff(f, method="fd4"):
    """Derivative with respect to the unit-period parameter ``s``.

    ``fd4`` is the 4th-order central stencil
    ``(-f[i+2] + 8 f[i+1] - 8 f[i-1] + f[i-2]) / (12 h)``;
    ``spectral`` differentiates the trigonometric interpolant (the Nyquist
    mode is dropped so the operator stays antisymmetric for even ``N``).
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    if method == "fd4":
        h = 1.0 / n
        return (-np.roll(f, -2, axis=0) + 8.0 * np.roll(f, -1, axis=0)
                - 8.0 * np.roll(f, 1, axis=0) + np.roll(f, 2, axis=0)) / (12.0 * h)
    if method == "spectral":
        k = _wavenumbers(n)
        if n % 2 == 0:
            k[n // 2] = 0.0
        shape = (n,) + (1,) * (f.ndim - 1)
        fh = np.fft.fft(f, axis=0)
        return np.fft.ifft(2j * np.pi * k.reshape(shape) * fh, axis=0).real
    raise ValueError(f"unknown differentiation method {method!r}; use one of {DIFF_METHODS}")


def antiderivative(f):
    """Mean-zero periodic antiderivative of mean-zero samples ``f``.

    The mean of ``f`` is discarded; callers are responsible for checking it.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    k = _wavenumbers(n)
    fh = np.fft.fft(f, axis=0)
    shape = (n,) + (1,) * (f.ndim - 1)
    kk = k.reshape(shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        gh = np.where(kk == 0, 0.0, fh / (2j * np.pi * np.where(kk == 0, 1.0, kk)))
    if n % 2 == 0:
        gh[n // 2] = 0.0
    return np.fft.ifft(gh, axis=0).real


class TrigInterpolant:
    """Trigonometric interpolant of grid samples, reusable across evaluations.

    Exact for band-limited data.  For even ``N`` the Nyquist coefficient is
    split symmetrically so that real data gives a real interpolant.  With
    ``rtol`` set, modes below ``rtol * max|coef|`` are dropped, which makes
    repeated evaluation of band-limited data cheap.
    """

    def __init__(self, f, rtol=0.0):
        f = np.asarray(f, dtype=float)
        n = f.shape[0]
        self.tail = f.shape[1:]
        fh = np.fft.fft(f, axis=0) / n
        k = _wavenumbers(n)
        if n % 2 == 0:
            # split the Nyquist mode between +N/2 and -N/2
            k = np.concatenate([k, [n // 2]])
            fh = np.concatenate([fh, fh[n // 2: n // 2 + 1]], axis=0)
            fh[n // 2] *= 0.5
            fh[-1] *= 0.5
        fh = fh.reshape(fh.shape[0], -1)
        if rtol > 0:
            mag = np.max(np.abs(fh), axis=1)
            keep = mag > rtol * max(float(mag.max()), 1e-300)
            k, fh = k[keep], fh[keep]
        self.k, self.coef = k, fh

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        phase = np.exp(2j * np.pi * np.outer(s.ravel(), self.k))
        out = (phase @ self.coef).real
        return out.reshape(s.shape + self.tail)


def trig_interp(f, s):
    """Evaluate the trigonometric interpolant of grid samples ``f`` at ``s``."""
    return TrigInterpolant(f)(s)


def trapz(f, axis=0):
    """Periodic rectangle rule ``sum(f) / N`` (spectrally accurate)."""
    f = np.asarray(f, dtype=float)
    return f.sum(axis=axis) / f.shape[axis]
