"""Kloosterman's form of the circle method as an exact detector of n = 0."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .arith import modinv
from .errors import InputError
from .oscillatory.quadrature import quad_osc_1d


@dataclass(frozen=True)
class CircleConfig:
    Q: int
    quad_tol: float = 1e-12

    def __post_init__(self):
        if self.Q < 1:
            raise InputError(f"Q must be >= 1, got {self.Q}")
        if not self.quad_tol > 0:
            raise InputError("quad_tol must be positive")


@dataclass(frozen=True)
class FareyTerm:
    """A pair 1 <= q <= Q < a <= q + Q with gcd(a, q) = 1, and abar = a^-1 mod q."""

    q: int
    a: int

    @property
    def abar(self) -> int:
        return modinv(self.a, self.q)


def farey_terms(cfg: CircleConfig) -> list[FareyTerm]:
    return [
        FareyTerm(q, a)
        for q in range(1, cfg.Q + 1)
        for a in range(cfg.Q + 1, q + cfg.Q + 1)
        if gcd(a, q) == 1
    ]


def _x_integral(n: int, aq: int) -> complex:
    """int_0^1 e(-n x / aq) dx in closed form."""
    if n == 0:
        return 1.0 + 0j
    z = -2j * np.pi * n / aq
    return complex(np.expm1(z) / z)


def _terms(n, cfg, integral):
    total = 0j
    for term in farey_terms(cfg):
        aq = term.a * term.q
        total += np.exp(2j * np.pi * ((n * term.abar) % term.q) / term.q) * integral(n, aq) / aq
    return 2.0 * total.real


def delta_eval(n: int, cfg: CircleConfig) -> float:
    """2 Re sum_(q,a) (1/aq) e(n abar / q) int_0^1 e(-n x / aq) dx, equal to [n = 0]."""
    return _terms(int(n), cfg, _x_integral)


def delta_eval_quadrature(n: int, cfg: CircleConfig) -> float:
    """Same identity with the x-integral from the adaptive oscillatory quadrature."""

    def integral(n, aq):
        one = lambda x: np.ones_like(x)  # noqa: E731
        return quad_osc_1d(one, lambda x: -n * x / aq, (0.0, 1.0), tol=cfg.quad_tol).value

    return _terms(int(n), cfg, integral)
