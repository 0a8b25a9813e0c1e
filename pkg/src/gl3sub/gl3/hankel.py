"""The transforms H_pm(y) = (1/2 pi i) int_(sigma) y^-s gamma_pm(s) h~(-s) ds."""

from __future__ import annotations

import numpy as np

from ..errors import BudgetExceeded, ContourOutOfRange
from ..oscillatory.quadrature import gl_grid
from .gamma import gamma_pm
from .params import GL3Params


def admissible_sigma(p: GL3Params) -> float:
    """Lower end of the admissible contours, -1 + max_i(-Re alpha_i)."""
    return -1.0 + float(np.max(-p.alpha.real))


class HankelTransform:
    """H_pm(y) for one weight h, sign and contour, evaluated for many y at once.

    The tau-range [-T, T] grows by doubling until the integral of
    |gamma_pm(sigma + i tau) h~(-sigma - i tau)| over T/2 <= |tau| <= T falls below
    ``tail_tol`` times its total; that last slab is the tail estimate. The
    quadrature is composite Gauss-Legendre on panels of width ``panel_width``
    and its error is estimated by comparing with a rule of twice the panels.
    """

    def __init__(self, h, sign: int, p: GL3Params, sigma: float = -0.5, tail_tol: float = 1e-9,
                 panel_width: float = 0.25, tau_start: float = 16.0, tau_cap: float = 1024.0):
        if sigma <= admissible_sigma(p):
            raise ContourOutOfRange(f"sigma={sigma} must exceed {admissible_sigma(p):.6g}")
        self.h, self.sign, self.p, self.sigma = h, sign, p, float(sigma)
        self.panel_width = panel_width
        lo, hi = h.support
        self._log_span = np.log(hi / lo)
        T = tau_start
        while True:
            v, w, F = self._values(T, 0)
            a = np.abs(F) * w
            total = float(np.sum(a))
            slab = float(np.sum(a[np.abs(v) >= T / 2]))
            if slab <= tail_tol * max(total, 1e-300):
                break
            T *= 2
            if T > tau_cap:
                raise BudgetExceeded(f"H transform needs |tau| beyond {tau_cap}")
        self.tau_max = T
        self.tail = slab / (2 * np.pi)
        self._fine = self._values(T, 1)
        self._coarse = (v, w, F)

    def _values(self, T, doubling):
        panels = int(np.ceil(2 * T / self.panel_width)) * 2**doubling
        v, w = gl_grid(-T, T, panels)
        s = self.sigma + 1j * v
        F = gamma_pm(s, self.sign, self.p) * self.mellin_minus(s)
        return v, w, F

    def mellin_minus(self, s, chunk=4_000_000):
        """h~(-s) = int h(e^u) e^(-s u) du on a Gauss-Legendre grid in u = log x.

        A closed form ``h.mellin`` is used when the weight carries one; otherwise
        two panels per cycle of the largest |Im s|, with a floor of 64 panels.
        """
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        if self.h.mellin is not None:
            return self.h.mellin(-s)
        lo, hi = self.h.support
        cycles = float(np.max(np.abs(s.imag))) * self._log_span / (2 * np.pi)
        u, wu = gl_grid(np.log(lo), np.log(hi), max(64, int(2 * cycles) + 8))
        hw = self.h(np.exp(u)) * wu
        out = np.empty(s.size, dtype=complex)
        step = max(1, chunk // u.size)
        for i in range(0, s.size, step):
            out[i : i + step] = np.exp(-np.outer(s[i : i + step], u)) @ hw
        return out

    @staticmethod
    def _apply(rule, y, sigma, chunk=2_000_000):
        v, w, F = rule
        wF = w * F
        out = np.empty(y.size, dtype=complex)
        ly = np.log(y)
        step = max(1, chunk // v.size)
        for i in range(0, y.size, step):
            out[i : i + step] = np.exp(-np.outer(ly[i : i + step], 1j * v)) @ wF
        return out * y**-sigma / (2 * np.pi)

    def __call__(self, y, with_error: bool = False):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        fine = self._apply(self._fine, y, self.sigma)
        if not with_error:
            return fine
        coarse = self._apply(self._coarse, y, self.sigma)
        return fine, np.abs(fine - coarse) + self.tail * y**-self.sigma


def h_pm(y, h, sign: int, p: GL3Params, contour_sigma: float = -0.5, tau_max: float | None = None):
    """H_pm at the points y; returns (values, error estimates)."""
    kw = {} if tau_max is None else {"tau_cap": tau_max}
    return HankelTransform(h, sign, p, contour_sigma, **kw)(y, with_error=True)
