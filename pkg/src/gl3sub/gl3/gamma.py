"""Gamma factors gamma_0, gamma_1, gamma_pm of the GL(3) dual transform."""

from __future__ import annotations

import numpy as np

from ..errors import InputError, PoleEncountered
from .params import GL3Params
from .special import LOG_PI, loggamma, rgamma_is_zero


def log_gamma_ell(s, ell: int, p: GL3Params):
    """log of gamma_ell(s); entries where a denominator Gamma has a pole are -inf.

    gamma_ell(s) = pi^(-3s-3/2)/2 prod_i Gamma((1+s+alpha_i+ell)/2) / Gamma((-s-alpha_i+ell)/2).
    """
    if ell not in (0, 1):
        raise InputError("ell must be 0 or 1")
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    out = (-3 * s - 1.5) * LOG_PI - np.log(2.0) + 0j
    zero = np.zeros(s.shape, dtype=bool)
    for a in p.alpha:
        num = (1 + s + a + ell) / 2
        den = (-s - a + ell) / 2
        if np.any(rgamma_is_zero(num)):
            raise PoleEncountered("gamma_ell: numerator Gamma at a pole")
        dz = rgamma_is_zero(den)
        zero |= dz
        out = out + loggamma(num) - loggamma(np.where(dz, 0.5, den))
    return np.where(zero, -np.inf + 0j, out)


def gamma_ell(s, ell: int, p: GL3Params):
    """gamma_ell(s) for array-like s (returns an array; a scalar for scalar s)."""
    scalar = np.ndim(s) == 0
    v = np.exp(log_gamma_ell(s, ell, p))
    return complex(v[0]) if scalar else v


def gamma_pm(s, sign: int, p: GL3Params):
    """gamma_pm(s) = gamma_0(s) - sign i gamma_1(s), ``sign`` = +1 or -1."""
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    scalar = np.ndim(s) == 0
    v = np.exp(log_gamma_ell(s, 0, p)) - sign * 1j * np.exp(log_gamma_ell(s, 1, p))
    return complex(v[0]) if scalar else v


CARRIER_SCALE = 2 * np.pi


def stirling_phi(tau, sign: int, p: GL3Params, scale: float = CARRIER_SCALE):
    """Phi_pm(tau) = gamma_pm(-1/2 + i tau) (|tau|/(e scale))^(-3 i tau), for |tau| >= 2.

    Each Gamma quotient in gamma_ell has argument about (tau/2) log(tau/2e), so the
    carrier that leaves a slowly varying remainder has scale 2 pi; with scale pi a
    linear phase 3 tau log 2 is left over. The carrier is removed inside the
    logarithm so large |tau| loses no accuracy.
    """
    tau = np.asarray(tau, dtype=float)
    scalar = tau.ndim == 0
    tau = np.atleast_1d(tau)
    if np.any(np.abs(tau) < 2):
        raise InputError("stirling_phi needs |tau| >= 2")
    s = -0.5 + 1j * tau
    carrier = -3j * tau * (np.log(np.abs(tau)) - 1 - np.log(scale))
    g0 = np.exp(log_gamma_ell(s, 0, p) + carrier)
    g1 = np.exp(log_gamma_ell(s, 1, p) + carrier)
    v = g0 - sign * 1j * g1
    return complex(v[0]) if scalar else v


def stirling_phi_prime(tau, sign: int, p: GL3Params, h: float = 1e-4, scale: float = CARRIER_SCALE):
    """Centred difference of Phi_pm with relative step ``h``."""
    tau = np.asarray(tau, dtype=float)
    d = h * np.maximum(1.0, np.abs(tau))
    return (stirling_phi(tau + d, sign, p, scale) - stirling_phi(tau - d, sign, p, scale)) / (2 * d)


def gamma_gl3(s, p: GL3Params):
    """Archimedean factor prod_i Gamma_R(s - alpha_i), Gamma_R(s) = pi^(-s/2) Gamma(s/2), as a log."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.zeros_like(s)
    for a in p.alpha:
        z = s - a
        out = out - 0.5 * z * LOG_PI + loggamma(z / 2)
    return out
