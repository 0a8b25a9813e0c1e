"""The x-integral of a product of two Fourier-Mellin transforms, its main term and error budget.

The object studied is

    I(q, r, tau) = int_0^1 V-dagger(N x / a q, 1/2 - i tau) U-dagger(N (r a - x) / a q, 1 - i t) dx,

evaluated exactly by nested quadrature and compared with a closed-form main
term valid for r tau > 0 and t + tau > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from ..errors import InputError, WindowViolation
from .mellin import MellinGrid, MellinInterpolant
from .quadrature import OscResult, quad_osc_1d

TWO_PI = 2.0 * np.pi
# -(2 pi)^(3/2) e(1/8), from two applications of the Fourier-Mellin main term
# and one stationary phase in x
C2 = -(TWO_PI**1.5) * np.exp(2j * np.pi / 8)


@dataclass(frozen=True)
class SpParams:
    """Parameters of one double transform.

    Invariants: N / t^(1-eps) < Q, C <= q < 2C, Q < a <= q + Q,
    gcd(a, q) = 1, r != 0 and t + tau > 0.
    """

    q: int
    a: int
    r: int
    t: float
    tau: float
    N: float
    C: float
    Q: float
    eps: float = 0.05

    def __post_init__(self):
        if self.N / self.t ** (1 - self.eps) >= self.Q:
            raise WindowViolation(f"need N/t^(1-eps) < Q, got {self.N / self.t ** (1 - self.eps):g} >= {self.Q}")
        if not self.C <= self.q < 2 * self.C:
            raise InputError(f"need C <= q < 2C, got q={self.q}, C={self.C}")
        if not self.Q < self.a <= self.q + self.Q:
            raise InputError(f"need Q < a <= q + Q, got a={self.a}")
        if gcd(self.a, self.q) != 1:
            raise InputError("need gcd(a, q) = 1")
        if self.r == 0:
            raise InputError("r must be nonzero")
        if self.t + self.tau <= 0:
            raise InputError("need t + tau > 0")

    @property
    def ra(self) -> float:
        return float(self.r * self.a)

    @property
    def x0(self) -> float:
        """Stationary point r a tau / (tau + t) of the x-phase."""
        return self.ra * self.tau / (self.tau + self.t)

    @property
    def tau0(self) -> float:
        """The tau for which x0 = 1."""
        return self.t / (self.ra - 1.0)

    @property
    def kappa0(self) -> float:
        return self.t**self.eps * np.sqrt(self.Q * self.C / self.N)

    @property
    def y0(self) -> float:
        """Stationary point q (t + tau) / (2 pi N |r|) of the V variable."""
        return self.q * (self.t + self.tau) / (TWO_PI * self.N * abs(self.r))

    def critical(self) -> bool:
        """Whether -tau lies in the window [2 pi N / a q, 4 pi N / a q] (sign-adjusted)."""
        lo = TWO_PI * self.N / (self.a * self.q)
        return lo <= abs(self.tau) <= 2 * lo


def _grids(p: SpParams, U, V):
    aq = p.a * p.q
    r_u = p.N * (abs(p.ra) + 1.0) / aq
    gu = MellinGrid(U, MellinGrid.cycles_needed(U, r_u, p.t))
    gv = MellinGrid(V, MellinGrid.cycles_needed(V, p.N / aq, p.tau))
    s_u, s_v = 1.0 - 1j * p.t, 0.5 - 1j * p.tau
    gu.refine(np.array([p.N * (p.ra - x) / aq for x in (0.0, 0.5, 1.0)]), s_u, tol=1e-11)
    gv.refine(np.array([p.N * x / aq for x in (0.1, 0.5, 1.0)]), s_v, tol=1e-11)
    return gu, gv


def istarstar(p: SpParams, U, V, tol: float = 1e-9) -> OscResult:
    """Exact value of the x-integral of V-dagger times U-dagger by nested quadrature.

    The inner transforms are computed on fixed grids sized to their
    oscillation (verified by one grid doubling) and interpolated in r by
    Chebyshev polynomials over the r-range swept by x in [0, 1]; the outer
    x-integral is adaptive with panels laid out along t log|ra - x| + tau log x.
    """
    gu, gv = _grids(p, U, V)
    aq = p.a * p.q
    s_u, s_v = 1.0 - 1j * p.t, 0.5 - 1j * p.tau
    x_lo = max(abs(p.tau) * aq / (4 * np.pi * p.N) * 0.5, 1e-12)
    iu = MellinInterpolant(gu, p.N * (p.ra - 1.0) / aq, p.N * p.ra / aq, s_u)
    iv = MellinInterpolant(gv, 0.0, p.N / aq, s_v)

    def g(x):
        return iv(p.N * x / aq) * iu(p.N * (p.ra - x) / aq)

    def hint(x):
        return (p.t * np.log(np.abs(p.ra - x)) + p.tau * np.log(np.maximum(x, x_lo))) / TWO_PI

    return quad_osc_1d(g, None, (0.0, 1.0), tol=tol, hint=hint, min_panels=16)


def v0(V, sigma, y):
    y = np.asarray(y, dtype=float)
    return np.where(y > 0, np.abs(y) ** sigma, 0.0) * V(y)


def i1_main(p: SpParams, V) -> complex:
    """Closed-form main term

        C2 r a / (t + tau)^(3/2) (q (t + tau) / 2 pi e N |r|)^(-i (t + tau)) V_0(3/2, y0)

    with y0 = q (t + tau) / (2 pi N |r|). Zero unless the x-stationary point
    x0 lies in (0, 1] and y0 lies inside supp V.
    """
    if p.r * p.tau <= 0 or p.x0 > 1.0:
        return 0j
    y0 = p.y0
    lo, hi = V.support
    if not lo < y0 < hi:
        return 0j
    base = y0 / np.e
    w = float(v0(V, 1.5, np.array([y0]))[0])
    return complex(C2 * p.ra / (p.t + p.tau) ** 1.5 * np.exp(-1j * (p.t + p.tau) * np.log(base)) * w)


def e_starstar(p: SpParams) -> float:
    tau = abs(p.tau)
    return min(1.0, tau * p.a * p.q / p.N) / (np.sqrt(p.t) * tau**1.5)


def b_error_bound(p: SpParams) -> float:
    """Error budget B(C, tau) for |I - I_1| (implied constant 1).

    QC/(N t^(1/2)) (t^eps/(1+|tau|))^10 + t^(-3/2+eps)
    + (E** + QC/(t^(1/2)|tau| N)) [|tau| > 1]
    + [critical] min(|tau - tau0|^-1, kappa0) / (t^(1/2) |tau|^(1/2)).
    """
    t, tau, eps = p.t, abs(p.tau), p.eps
    qc_n = p.Q * p.C / p.N
    b = qc_n / np.sqrt(t) * (t**eps / (1 + tau)) ** 10 + t ** (-1.5 + eps)
    if tau > 1:
        b += e_starstar(p) + qc_n / (np.sqrt(t) * tau)
    if p.critical():
        d = abs(p.tau - p.tau0)
        m = p.kappa0 if d == 0 else min(1.0 / d, p.kappa0)
        b += m / (np.sqrt(t) * np.sqrt(tau))
    return float(b)
