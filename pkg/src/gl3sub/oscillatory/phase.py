"""Real phases (in cycles) with derivative oracles and scale parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass
class PhaseSpec:
    """Phase f for e(f(x)) = exp(2 pi i f(x)), with f', f'', f''', f'''' callables.

    ``theta``, ``omega_f`` and ``omega_g`` are the scale parameters for which
    |f^(i)| <= theta / omega_f**i and |g^(j)| <= omega_g**-j. ``lam`` (min |f'|)
    and ``kappa`` (stationary-point margin) are optional and computed on
    demand by the expansions that need them.
    """

    f: Callable
    derivs: Sequence[Callable]
    theta: float = 1.0
    omega_f: float = 1.0
    omega_g: float = 1.0
    lam: float | None = None
    kappa: float | None = None
    name: str = field(default="phase")

    def __call__(self, x):
        return self.f(x)

    def d(self, k, x):
        if k == 0:
            return self.f(x)
        return self.derivs[k - 1](x)

    def check_derivatives(self, xs, rel=1e-5, step=None):
        """Compare each supplied derivative with a centred difference of the one below.

        Returns the worst relative discrepancy (scaled by the sampled maximum of
        the derivative being checked); raises ``AssertionError`` above ``rel``.
        """
        xs = np.asarray(xs, dtype=float)
        worst = 0.0
        for k in range(1, len(self.derivs) + 1):
            h = step if step is not None else 1e-4 * max(1.0, float(np.max(np.abs(xs)))) * 1e-1
            fd = (self.d(k - 1, xs + h) - self.d(k - 1, xs - h)) / (2 * h)
            exact = self.d(k, xs)
            scale = max(float(np.max(np.abs(exact))), 1e-300)
            worst = max(worst, float(np.max(np.abs(fd - exact))) / scale)
        if worst > rel:
            raise AssertionError(f"derivative mismatch {worst:.3e} > {rel:g} for {self.name}")
        return worst


def linear(T: float, c: float = 0.0) -> PhaseSpec:
    """f(x) = T x + c."""
    return PhaseSpec(
        lambda x: T * np.asarray(x) + c,
        [lambda x: T + 0 * np.asarray(x), lambda x: 0 * np.asarray(x), lambda x: 0 * np.asarray(x),
         lambda x: 0 * np.asarray(x)],
        theta=abs(T), omega_f=1.0, name=f"linear({T})",
    )


def quadratic(T: float, x0: float = 0.0, slope: float = 0.0) -> PhaseSpec:
    """f(x) = T (x - x0)^2 + slope x."""
    return PhaseSpec(
        lambda x: T * (np.asarray(x) - x0) ** 2 + slope * np.asarray(x),
        [lambda x: 2 * T * (np.asarray(x) - x0) + slope, lambda x: 2 * T + 0 * np.asarray(x),
         lambda x: 0 * np.asarray(x), lambda x: 0 * np.asarray(x)],
        theta=abs(T), omega_f=1.0, name=f"quadratic({T})",
    )


def log_pair(t: float, tau: float, shift: float) -> PhaseSpec:
    """f(x) = (t log|shift - x| + tau log x) / 2 pi, the x-phase of the double transform.

    With ``shift = r a`` the stationary point is x0 = r a tau / (tau + t).
    """

    def f(x):
        x = np.asarray(x, dtype=float)
        return (t * np.log(np.abs(shift - x)) + tau * np.log(x)) / TWO_PI

    def dk(k):
        from math import factorial

        c = factorial(k - 1)

        def g(x):
            x = np.asarray(x, dtype=float)
            return (-t * c / (shift - x) ** k + tau * (-1) ** (k - 1) * c / x**k) / TWO_PI

        return g

    return PhaseSpec(f, [dk(1), dk(2), dk(3), dk(4)], name=f"log_pair(t={t},tau={tau})")


def mellin_phase(beta: float, r: float) -> PhaseSpec:
    """f(x) = beta log x / 2 pi - r x, the phase of U-dagger(r, sigma + i beta)."""
    return PhaseSpec(
        lambda x: beta * np.log(x) / TWO_PI - r * np.asarray(x),
        [lambda x: beta / (TWO_PI * np.asarray(x)) - r,
         lambda x: -beta / (TWO_PI * np.asarray(x) ** 2),
         lambda x: 2 * beta / (TWO_PI * np.asarray(x) ** 3),
         lambda x: -6 * beta / (TWO_PI * np.asarray(x) ** 4)],
        theta=abs(beta) / TWO_PI, name=f"mellin(beta={beta},r={r})",
    )


@dataclass
class PhaseSpec2D:
    """Two-variable phase (cycles) with its second-derivative oracles."""

    f: Callable
    fxx: Callable
    fyy: Callable
    fxy: Callable
    name: str = "phase2d"

    def __call__(self, x, y):
        return self.f(x, y)

    def hessian_det(self, x, y):
        return self.fxx(x, y) * self.fyy(x, y) - self.fxy(x, y) ** 2
