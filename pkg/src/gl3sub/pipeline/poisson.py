"""Poisson summation of the r-sum after splitting r into residue classes mod q."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

import numpy as np

from ..arith import modinv
from ..errors import InputError
from ..oscillatory.mellin import fourier_mellin_exact
from .config import PipelineConfig

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PoissonResult:
    """lhs, rhs, residual and budget; ``terms`` maps each dual r to its U-dagger term."""

    lhs: complex
    rhs: complex
    residual: float
    budget: float
    terms: dict = field(default_factory=dict)

    @property
    def r0_term(self) -> complex:
        return self.terms.get(0, 0j)


def ibp_constants(U, s: complex, j_max: int | None = None, npts: int = 4001) -> np.ndarray:
    """M_j >= int |d^j/dx^j (U(x) x^(s-1))| dx for j = 0..j_max, by Leibniz and the triangle inequality.

    Then |U-dagger(rho, s)| <= M_j / (2 pi |rho|)^j for every j.
    """
    j_max = U.j_max if j_max is None else min(j_max, U.j_max)
    lo, hi = U.support
    x = np.linspace(lo, hi, npts)
    derivs = [np.abs(U(x))] + [np.abs(U.derivative(x, k)) for k in range(1, j_max + 1)]
    sigma = complex(s).real
    out = np.empty(j_max + 1)
    for j in range(j_max + 1):
        total = np.zeros_like(x)
        for k in range(j + 1):
            m = j - k
            falling = np.prod([abs(complex(s) - 1 - i) for i in range(m)]) if m else 1.0
            total += comb(j, k) * derivs[k] * falling * x ** (sigma - 1 - m)
        # trapezoid on a fine grid; 1% slack covers its error
        out[j] = 1.01 * float(np.sum(0.5 * (total[1:] + total[:-1]) * np.diff(x)))
    return out


def udagger_bound(M: np.ndarray, rho) -> np.ndarray:
    """min_j M_j / (2 pi |rho|)^j."""
    rho = np.abs(np.atleast_1d(np.asarray(rho, dtype=float)))
    j = np.arange(M.size)
    with np.errstate(divide="ignore"):
        vals = M[None, :] / (TWO_PI * rho[:, None]) ** j[None, :]
    return vals.min(axis=1)


def _progression_tail(M, rho0, step):
    """Bound for sum_{k >= 0} min_j M_j / (2 pi (rho0 + k step))^j, using j >= 2."""
    best = np.inf
    for j in range(2, M.size):
        c = M[j] / TWO_PI**j
        best = min(best, c * (rho0**-j + rho0 ** (1 - j) / ((j - 1) * step)))
    return best


def r_sum(q: int, a: int, x: float, cfg: PipelineConfig, U) -> complex:
    """sum_{r >= 1} r^(-it) e(r abar / q) e(-r x / a q) U(r / N), directly."""
    lo, hi = U.support
    r = np.arange(max(1, int(np.ceil(lo * cfg.N))), int(np.floor(hi * cfg.N)) + 1)
    abar = modinv(a, q) if q > 1 else 0
    rf = r.astype(float)
    phase = ((r * abar) % q) / q - rf * x / (a * q)
    return complex(np.sum(np.exp(-1j * cfg.t * np.log(rf) + TWO_PI * 1j * phase) * U(rf / cfg.N)))


def poisson_r_check(q: int, a: int, x: float, cfg: PipelineConfig, U, quad_tol: float = 1e-12) -> PoissonResult:
    """Compare the r-sum with its Poisson dual.

    rhs = N^(1-it) sum_{r = -abar mod q} U-dagger(N (r a + x) / a q, 1 - it).

    Dual terms are summed outward from the class representatives until the
    integration-by-parts bound on what remains falls below ``cfg.tol``; that
    bound, the quadrature estimates (times N) and a rounding allowance form the budget.
    """
    if gcd(a, q) != 1:
        raise InputError(f"gcd({a}, {q}) != 1")
    if not 0 <= x <= 1:
        raise InputError("x must lie in [0, 1]")
    N, t = cfg.N, cfg.t
    s = 1.0 - 1j * t
    lhs = r_sum(q, a, x, cfg, U)
    M = ibp_constants(U, s)
    abar = modinv(a, q) if q > 1 else 0
    r0 = (-abar) % q
    scale = N / (a * q)
    step = N  # consecutive r in the class differ by q, so rho moves by N
    rhs = 0j
    err = 0.0
    terms = {}
    for direction in (1, -1):
        r = r0 if direction == 1 else r0 - q
        while True:
            rho = scale * (r * a + x)
            tail = _progression_tail(M, abs(rho), step) if abs(rho) > 0 else np.inf
            if direction * rho > 0 and tail * N < cfg.tol:
                err += tail * N
                break
            res = fourier_mellin_exact(U, rho, s, tol=quad_tol)
            term = N * np.exp(-1j * t * np.log(N)) * res.value
            terms[r] = complex(term)
            rhs += term
            err += N * res.err_est
            r += direction * q
    budget = err + 1e-14 * (abs(lhs) + float(np.sum(np.abs(U(np.arange(1, 3 * N)/ N)))))
    return PoissonResult(lhs, complex(rhs), abs(lhs - rhs), float(budget), terms)
