"""Numerical check of the GL(3) Voronoi identity for additive twists e(an/q)."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import mpmath as mp
import numpy as np

from ..arith import divisors, kloosterman, modinv, weil_bound
from ..errors import InputError, InsufficientData, NonCuspidalTable
from .coefficients import CoefficientTable
from .hankel import HankelTransform
from .params import GL3Params


@dataclass(frozen=True)
class VoronoiResult:
    """Both sides of the identity, the residual and the error budget.

    ``polar`` is the Eisenstein polar correction already included in ``rhs``
    (zero for cusp forms). ``dual_length`` is the n2 truncation per divisor n1.
    """

    lhs: complex
    rhs: complex
    residual: float
    budget: float
    polar: complex
    dual_length: dict


def _lhs(table: CoefficientTable, a: int, q: int, h):
    lo, hi = h.support
    n_lo, n_hi = max(1, int(np.ceil(lo))), int(np.floor(hi))
    coef = table.row(n_hi)
    n = np.arange(n_lo, n_hi + 1)
    # |h| < h(support edge) beyond the window; bound the dropped mass by it
    edge = float(max(abs(h(np.array([float(lo)]))[0]), abs(h(np.array([float(hi)]))[0])))
    phase = np.exp(2j * np.pi * ((a * n) % q) / q)
    return complex(np.sum(coef[n_lo:] * phase * h(n.astype(float)))), edge * float(np.sum(np.abs(coef[1:]))), n_hi


def polar_correction(p: GL3Params, q: int, h, dps: int = 20) -> complex:
    """sum_i h~(1+alpha_i) Res_{s=1+alpha_i} sum_n lambda(1,n) e(an/q) n^-s for Eisenstein data.

    The residue is sum_{q | n_j n_k} n_j^-w_j n_k^-w_k with w_j = 1 + alpha_i - alpha_j,
    continued analytically as q^(-w_j-w_k) sum_{b_j, b_k <= q, q | b_j b_k} zeta(w_j, b_j/q) zeta(w_k, b_k/q)
    (Hurwitz zeta); it does not depend on a. The alpha_i must be distinct.
    """
    if h.mellin is None:
        raise InputError("the polar correction needs a weight with a closed-form Mellin transform")
    alpha = [complex(x) for x in p.alpha]
    if min(abs(alpha[i] - alpha[j]) for i in range(3) for j in range(i)) < 1e-8:
        raise InputError("the polar correction needs distinct Langlands parameters")
    total = 0j
    with mp.workdps(dps):
        for i in range(3):
            j, k = (x for x in range(3) if x != i)
            wj, wk = (mp.mpc(1 + alpha[i] - alpha[m]) for m in (j, k))
            zj = {b: mp.zeta(wj, mp.mpf(b) / q) for b in range(1, q + 1)}
            zk = {b: mp.zeta(wk, mp.mpf(b) / q) for b in range(1, q + 1)}
            res = sum(zj[bj] * zk[bk] for bj in range(1, q + 1) for bk in range(1, q + 1) if (bj * bk) % q == 0)
            res *= mp.power(q, -wj - wk)
            total += complex(h.mellin(1 + alpha[i])) * complex(res)
    return total


def _dual_length(transform: HankelTransform, n1: int, q: int, tol: float, cap: int) -> int:
    """Smallest n2 on a geometric grid with |H(n1^2 n2 / q^3)| n2^(1/2) below ``tol`` from there on."""
    n = np.unique(np.round(1.1 ** np.arange(0, 400)).astype(np.int64))
    n = n[n <= cap]
    vals = np.abs(transform(n1 * n1 * n / q**3)) * np.sqrt(n)
    big = np.nonzero(vals >= tol)[0]
    if big.size == 0:
        return 1
    if big[-1] == n.size - 1:
        raise InsufficientData(f"dual sum not negligible by n2={cap}")
    return int(n[big[-1] + 1])


def _dual_tail(transform, n1, q, c, m, lam_bound):
    """Estimate of sum_{n2 > m} |lambda| / (n1 n2) Weil(c) |H(n1^2 n2 / q^3)| by a geometric Riemann sum."""
    y = m * 1.05 ** np.arange(1, 600)
    hv = np.abs(transform(n1 * n1 * y / q**3))
    return float(np.sum(lam_bound(y) / (n1 * y) * weil_bound(1, 1, c) * hv * 0.05 * y))


def voronoi_check(table: CoefficientTable, a: int, q: int, h, *, p: GL3Params | None = None,
                  contour_sigma: float = 1.5, dual_tol: float = 1e-13, allow_eisenstein: bool = False,
                  dual_cap: int = 200_000) -> VoronoiResult:
    """Compare sum lambda(1,n) e(an/q) h(n) with the dual side.

    rhs = q sum_pm sum_{n1 | q} sum_n2 lambda(n2,n1)/(n1 n2) S(a_bar, pm n2; q/n1) H_pm(n1^2 n2 / q^3).

    Non-cuspidal tables are refused unless ``allow_eisenstein`` is set, in which
    case the polar correction of :func:`polar_correction` is added to the rhs.
    The budget is the quadrature error of the H transforms summed with the same
    weights, the lhs window cut-off, and a tail estimate of the dual sum using
    |lambda(n2,n1)| <= d(n1)^2 (log n2 + 1)^2 and the Weil bound. The default
    contour Re s = 3/2 puts the factor y^(-3/2) in front of the H quadrature, so
    its rounding floor falls with y along with H itself.
    """
    if gcd(a, q) != 1:
        raise InputError(f"gcd({a}, {q}) != 1")
    if not table.cuspidal and not allow_eisenstein:
        raise NonCuspidalTable("Voronoi check refused: non-cuspidal table has polar terms")
    p = p or table.params
    lhs, lhs_err, _ = _lhs(table, a, q, h)
    abar = modinv(a, q) if q > 1 else 0
    rhs = 0j
    budget = lhs_err
    lengths = {}
    for sign in (1, -1):
        transform = HankelTransform(h, sign, p, contour_sigma)
        for n1 in divisors(q):
            c = q // n1
            m = _dual_length(transform, n1, q, dual_tol, dual_cap)
            lengths[(sign, n1)] = m
            if m > table.dual_depth:
                raise InsufficientData(f"need lambda(n,1) to n={m}, table has {table.dual_depth}")
            n2 = np.arange(1, m + 1)
            lam = table.hecke_block(n1, m)[1:]
            kl = np.array([kloosterman(abar, sign * int(k), c) for k in n2])
            hv, he = transform(n1 * n1 * n2 / q**3, with_error=True)
            w = q * lam / (n1 * n2) * kl
            rhs += complex(np.sum(w * hv))
            budget += float(np.sum(np.abs(w) * he))
            d1 = len(divisors(n1))
            budget += q * _dual_tail(transform, n1, q, c, m, lambda y: d1**2 * (np.log(y) + 1) ** 2)
    polar = 0j
    if not table.cuspidal:
        polar = polar_correction(p, q, h)
        rhs += polar
    budget += 1e-15 * (abs(lhs) + abs(rhs))
    return VoronoiResult(lhs, rhs, abs(lhs - rhs), budget, polar, lengths)
