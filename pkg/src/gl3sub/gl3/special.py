"""Complex log-gamma and an Euler-Maclaurin zeta, vectorized over numpy arrays."""

from __future__ import annotations

import numpy as np

from ..errors import PoleEncountered

LOG_2PI_HALF = 0.5 * np.log(2 * np.pi)
LOG_PI = np.log(np.pi)

# B_2k for k = 1..12
_BERNOULLI = np.array([
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
    43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730,
])
_STIRLING = np.array([b / ((2 * k + 2) * (2 * k + 1)) for k, b in enumerate(_BERNOULLI)])
_SHIFT = 15.0


def _stirling(z):
    """log Gamma(z) for Re z >= 15 by the asymptotic series with 12 Bernoulli terms."""
    w = 1.0 / z
    w2 = w * w
    acc = np.zeros_like(z)
    for c in _STIRLING[::-1]:
        acc = acc * w2 + c
    return (z - 0.5) * np.log(z) - z + LOG_2PI_HALF + acc * w


def log_sin_pi(z):
    """A branch of log sin(pi z) that does not overflow for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    flip = z.imag < 0
    zz = np.where(flip, np.conj(z), z)
    # sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / 2i and |e^{2 i pi z}| <= 1 here
    out = -1j * np.pi * zz + np.log(-np.expm1(2j * np.pi * zz)) - np.log(2j)
    out = out + 1j * np.pi
    return np.where(flip, np.conj(out), out)


def loggamma(z):
    """A branch of log Gamma(z) for complex z.

    Reflection for Re z < 1/2, upward recurrence to Re z >= 15, then Stirling.
    Only exp(loggamma) is meant to be used; the imaginary part is correct modulo 2 pi.
    Raises PoleEncountered at non-positive integers.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    near_int = np.abs(z - np.round(z.real)) < 1e-14 * np.maximum(1.0, np.abs(z))
    if np.any(near_int & (np.round(z.real) <= 0)):
        raise PoleEncountered("Gamma has a pole at a non-positive integer")
    refl = z.real < 0.5
    w = np.where(refl, 1.0 - z, z)
    m = np.maximum(0, np.ceil(_SHIFT - w.real)).astype(int)
    shift_log = np.zeros_like(w)
    for k in range(int(m.max(initial=0))):
        active = k < m
        shift_log = shift_log + np.where(active, np.log(np.where(active, w + k, 1.0)), 0.0)
    lg = _stirling(w + m) - shift_log
    out = np.where(refl, LOG_PI - log_sin_pi(np.where(refl, z, 0.5)) - lg, lg)
    return out[0] if scalar else out


def gamma(z):
    """Gamma(z) as exp(loggamma(z))."""
    return np.exp(loggamma(z))


def rgamma_is_zero(z, tol=1e-14):
    """True where 1/Gamma(z) vanishes (z a non-positive integer)."""
    z = np.asarray(z, dtype=complex)
    r = np.round(z.real)
    return (np.abs(z - r) < tol * np.maximum(1.0, np.abs(z))) & (r <= 0)


def zeta_em(s, terms: int | None = None, order: int = 12) -> complex:
    """Riemann zeta by Euler-Maclaurin summation, for s != 1.

    zeta(s) = sum_{n<M} n^-s + M^{1-s}/(s-1) + M^-s/2
              + sum_k B_2k/(2k)! s(s+1)...(s+2k-2) M^{-s-2k+1}.
    M defaults to about |Im s| + 30, which keeps the tail far below 1e-14 for the
    default ``order``.
    """
    s = complex(s)
    if s == 1:
        raise PoleEncountered("zeta has a pole at s = 1")
    M = int(terms if terms is not None else abs(s.imag) + 30)
    n = np.arange(1, M, dtype=float)
    head = np.sum(np.exp(-s * np.log(n)))
    total = head + M ** (1 - s) / (s - 1) + 0.5 * M ** (-s)
    rising = s
    fact = 2.0
    for k in range(1, order + 1):
        total += _BERNOULLI[k - 1] / fact * rising * M ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return complex(total)
