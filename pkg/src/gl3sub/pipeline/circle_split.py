"""S(N) = S+(N) + S-(N) through Kloosterman's circle method, before any dual summation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circle import CircleConfig, farey_terms
from ..errors import BudgetExceeded, InsufficientData
from ..gl3.coefficients import CoefficientTable
from ..oscillatory.quadrature import gl_grid
from .config import PipelineConfig

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class CircleSplit:
    s_plus: complex
    s_minus: complex
    total: complex
    err_est: float
    nodes: int


def _window(support, N):
    lo, hi = support
    return np.arange(max(1, int(np.ceil(lo * N))), int(np.floor(hi * N)) + 1)


def _exp_sum(coef, idx, freq_sign, x, aq, chunk=2_000_000):
    """sum_k coef_k e(freq_sign idx_k x / aq) at each x."""
    out = np.empty(x.size, dtype=complex)
    step = max(1, chunk // max(idx.size, 1))
    for i in range(0, x.size, step):
        ph = np.outer(x[i : i + step], idx.astype(float)) * (freq_sign * TWO_PI / aq)
        out[i : i + step] = np.exp(1j * ph) @ coef
    return out


def s_pm_circle(table: CoefficientTable, cfg: PipelineConfig, U, V, node_cap: int = 2_000_000,
                panels_per_cycle: float = 1.0) -> CircleSplit:
    """S+ and S- with the x-integral by composite Gauss-Legendre quadrature.

    For each (q, a), S+ integrates (1/aq) R(x) M(x) over [0, 1] with
    R(x) = sum_r r^(-it) e(r abar/q) e(-r x/aq) U(r/N) and
    M(x) = sum_n lambda(1,n) e(-n abar/q) e(n x/aq) V(n/N); S- flips every
    exponential. Panels follow the highest frequency of the product; the
    result is compared with a rule of twice the panels, whose value is returned.
    """
    cfg.require_desk_scale()
    r = _window(U.support, cfg.N)
    n = _window(V.support, cfg.N)
    if n[-1] > table.depth:
        raise InsufficientData(f"need lambda(1,n) to n={n[-1]}, table has {table.depth}")
    rf, nf = r.astype(float), n.astype(float)
    r_base = np.exp(-1j * cfg.t * np.log(rf)) * U(rf / cfg.N)
    n_base = table.row(int(n[-1]))[n] * V(nf / cfg.N)
    terms = farey_terms(CircleConfig(int(cfg.Q)))
    top = float(r[-1] + n[-1])
    plan = [(term, max(8, int(np.ceil(panels_per_cycle * top / (term.a * term.q))) + 1)) for term in terms]
    nodes = sum(3 * p * 16 for _, p in plan)
    if nodes > node_cap:
        raise BudgetExceeded(f"circle split needs {nodes} x-nodes, cap {node_cap}")
    plus = {1: 0j, 2: 0j}
    minus = {1: 0j, 2: 0j}
    for term, panels in plan:
        q, a, aq = term.q, term.a, term.a * term.q
        abar = term.abar if q > 1 else 0
        er = np.exp(TWO_PI * 1j * ((r * abar) % q) / q)
        en = np.exp(-TWO_PI * 1j * ((n * abar) % q) / q)
        for level in (1, 2):
            x, w = gl_grid(0.0, 1.0, panels * level)
            rp = _exp_sum(r_base * er, r, -1, x, aq)
            mp = _exp_sum(n_base * en, n, 1, x, aq)
            rm = _exp_sum(r_base * np.conj(er), r, 1, x, aq)
            mm = _exp_sum(n_base * np.conj(en), n, -1, x, aq)
            plus[level] += complex(np.sum(w * rp * mp)) / aq
            minus[level] += complex(np.sum(w * rm * mm)) / aq
    err = abs(plus[2] - plus[1]) + abs(minus[2] - minus[1])
    return CircleSplit(plus[2], minus[2], plus[2] + minus[2], float(err), nodes)
