"""S(N, C) after both dual summations, split into main-term and remainder parts per partition piece."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from ..arith import kloosterman, modinv
from ..errors import BudgetExceeded, InputError
from ..gl3.coefficients import CoefficientTable
from ..gl3.gamma import gamma_pm
from ..gl3.params import GL3Params
from ..oscillatory.partition import build_partition
from ..oscillatory.quadrature import gl_grid, quad_osc_1d
from ..oscillatory.sp import SpParams, i1_main
from ..parallel import keyed_map, ordered_sum
from ..smooth import default_u, default_v
from .config import PipelineConfig

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SncTerms:
    """Per-piece sums S_1,J and S_2,J keyed by J, the direct I** total and quadrature estimates."""

    s1: dict
    s2: dict
    direct: complex
    err_est: float
    pairs: int
    nodes: int
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> complex:
        return ordered_sum(self.s1) + ordered_sum(self.s2)

    @property
    def s2_total(self) -> complex:
        return ordered_sum(self.s2)


def dual_pairs(cfg: PipelineConfig, C: int) -> list[tuple[int, int, int]]:
    """(q, r, a) with C <= q < 2C, 1 <= |r| <= r_max(q), gcd(r, q) = 1 and a the
    representative of the inverse of -r mod q in (Q, q + Q]."""
    Q = int(cfg.Q)
    out = []
    for q in range(C, 2 * C):
        r_top = int(np.floor(cfg.r_max(q)))
        for r in range(-r_top, r_top + 1):
            if r == 0 or gcd(r, q) != 1:
                continue
            a0 = modinv((-r) % q, q) if q > 1 else 0
            a = Q + 1 + ((a0 - Q - 1) % q)
            out.append((q, r, a))
    return out


def _tau_grid(T, breaks, panel_width, level):
    edges = np.unique(np.concatenate([[-T, T], [b for b in breaks if -T < b < T]]))
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = gl_grid(lo, hi, max(1, int(np.ceil((hi - lo) / panel_width))) * level)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class _PairJob:
    q: int
    r: int
    a: int
    C: int
    cfg: PipelineConfig
    T: float
    panel_width: float


def istar_separable(q: int, a: int, r: int, t: float, N: float, tau, U, V, u_panels: int = 64,
                    y_panels: int = 16) -> np.ndarray:
    """I**(q, r, tau) at many tau through a tau-free kernel.

    Opening both transforms and doing the x-integral in closed form gives

        I** = int V(y) y^(-1/2 - i tau) K(y) dy,
        K(y) = int U(u) u^(-i t) e(-N r u / q) E(N (u - y) / a q) du,

    with E(b) = int_0^1 e(b x) dx = e^(i pi b) sinc(b). K is computed once on a
    Gauss-Legendre y-grid, so each extra tau costs one dot product.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    u, wu = gl_grid(*U.support, u_panels)
    y, wy = gl_grid(*V.support, y_panels)
    aq = a * q
    fu = wu * U(u) * np.exp(-1j * t * np.log(u) - TWO_PI * 1j * N * r * u / q)
    beta = N * (u[None, :] - y[:, None]) / aq
    K = (np.exp(1j * np.pi * beta) * np.sinc(beta)) @ fu
    fy = wy * V(y) * y**-0.5 * K
    return np.exp(-1j * np.outer(tau, np.log(y))) @ fy


def _separable_panels(q, a, r, t, N, U, V, tau_extent):
    """Panel counts holding about one cycle of each factor per panel."""
    du = U.support[1] - U.support[0]
    dy = V.support[1] - V.support[0]
    u_cycles = du * (N * abs(r) / q + t / (TWO_PI * U.support[0]) + N * dy / (a * q))
    y_cycles = dy * (N * du / (a * q) + tau_extent / (TWO_PI * V.support[0]))
    return max(16, int(np.ceil(u_cycles)) + 8), max(8, int(np.ceil(y_cycles)) + 4)


def _pair_values(job: _PairJob):
    """I** and I_1 on the level-1 and level-2 tau grids of one (q, r).

    I** comes from the separable form on u and y grids sized to the oscillation;
    the difference from grids of twice the panels is carried as its error.
    """
    U, V = default_u(), default_v()
    cfg = job.cfg
    ra = job.r * job.a
    breaks = [0.0] + ([cfg.t / (ra - 1.0)] if ra > 1 else [])
    nu, ny = _separable_panels(job.q, job.a, job.r, cfg.t, cfg.N, U, V, job.T)
    out = {}
    for level in (1, 2):
        tau, w = _tau_grid(job.T, breaks, job.panel_width, level)
        istar = istar_separable(job.q, job.a, job.r, cfg.t, cfg.N, tau, U, V, 2 * nu, 2 * ny)
        check = istar_separable(job.q, job.a, job.r, cfg.t, cfg.N, tau, U, V, nu, ny)
        main = np.array([i1_main(SpParams(q=job.q, a=job.a, r=job.r, t=cfg.t, tau=float(tk), N=cfg.N, C=job.C,
                                          Q=cfg.Q, eps=cfg.eps), V) for tk in tau])
        err = float(np.sum(np.abs(w) * np.abs(istar - check)))
        out[level] = (tau, w, istar, main, err)
    return out


def snc_assemble(table: CoefficientTable, cfg: PipelineConfig, C: int, params: GL3Params | None = None,
                 panel_width: float = 0.25, workers: int = 1,
                 pair_cap: int = 200) -> SncTerms:
    """S_1,J(N, C) and S_2,J(N, C) for every piece J of the tau partition.

    I_1 is the closed-form main term and I_2 = I** - I_1, with I** from
    :func:`istar_separable`. The tau-integrals use one composite Gauss-Legendre
    grid per (q, r), broken at 0 and at the tau where the x-stationary point
    leaves [0, 1], and shared by every J, sign and n. The grid is
    compared with one of twice the panels, whose values are returned.
    ``direct`` is the same sum with I** in place of I_1 + I_2 and the partition
    summed before integration.
    """
    cfg.require_desk_scale()
    cfg.require_window()
    C = int(C)
    if C < 1:
        raise InputError("C must be a positive integer")
    params = table.params if params is None else params
    T_range = cfg.N * cfg.t**cfg.eps / (cfg.Q * C)
    pieces = build_partition(T_range)
    T = max(max(abs(b) for b in pc.weight.support) for pc in pieces)
    pairs = dual_pairs(cfg, C)
    if len(pairs) > pair_cap:
        raise BudgetExceeded(f"{len(pairs)} (q, r) pairs exceed cap {pair_cap}")
    n_top = int(np.floor(cfg.n_max()))
    jobs = [((q, r), _PairJob(q, r, a, C, cfg, T, panel_width)) for q, r, a in pairs]
    values = keyed_map(_pair_values, jobs, workers)

    pref = cfg.N ** 0.5 * np.exp(-1j * cfg.t * np.log(cfg.N)) / TWO_PI
    s1, s2, direct, diff = {}, {}, {}, 0.0
    for (q, r, a) in pairs:
        level_sums = {}
        for level in (1, 2):
            tau, w, istar, main, _ = values[(q, r)][level]
            wj = np.array([pc.weight(tau) for pc in pieces])  # pieces x nodes
            coef = {}
            for sign in (1, -1):
                g = gamma_pm(-0.5 + 1j * tau, sign, params) * w
                for n1 in range(1, q + 1):
                    if q % n1:
                        continue
                    qh = q // n1
                    rbar = modinv(r % qh, qh) if qh > 1 else 0
                    for n2 in range(1, n_top // (n1 * n1) + 1):
                        lam = complex(table(n2, n1))
                        if lam == 0:
                            continue
                        k = kloosterman(rbar, sign * n2, qh) if qh > 1 else 1.0
                        c = lam / np.sqrt(n2) * k / (a * q**1.5)
                        osc = np.exp(-1j * tau * np.log(n1 * n1 * n2 * cfg.N / q**3))
                        coef_vec = c * g * osc
                        coef[(sign, n1, n2)] = coef_vec
            kernel = sum(coef.values()) if coef else np.zeros(tau.size, dtype=complex)
            level_sums[level] = (wj @ (kernel * main), wj @ (kernel * (istar - main)),
                                 complex(np.sum(kernel * istar * wj.sum(axis=0))))
        diff += float(np.sum(np.abs(level_sums[2][0] - level_sums[1][0]))
                      + np.sum(np.abs(level_sums[2][1] - level_sums[1][1])))
        one, two, dd = level_sums[2]
        for pc, v1, v2 in zip(pieces, one, two):
            s1[(pc.J, q, r)] = pref * v1
            s2[(pc.J, q, r)] = pref * v2
        direct[(q, r)] = pref * dd
    by_j1, by_j2 = {}, {}
    for pc in pieces:
        by_j1[pc.J] = ordered_sum({k: v for k, v in s1.items() if k[0] == pc.J})
        by_j2[pc.J] = ordered_sum({k: v for k, v in s2.items() if k[0] == pc.J})
    quad_err = sum(values[(q, r)][2][4] for q, r, _ in pairs)
    nodes = sum(values[(q, r)][1][0].size + values[(q, r)][2][0].size for q, r, _ in pairs)
    meta = {"C": C, "tau_range": T_range, "tau_extent": T, "pieces": len(pieces), "n_max": n_top}
    return SncTerms(by_j1, by_j2, ordered_sum(direct), abs(pref) * (diff + quad_err), len(pairs), nodes, meta)


def s1_piece_adaptive(table: CoefficientTable, cfg: PipelineConfig, C: int, J: float,
                      params: GL3Params | None = None, tol: float = 1e-12) -> complex:
    """S_1,J(N, C) with each tau-integral done adaptively on the closed-form I_1.

    An independent route to the S_1 part: no shared grid, no I** evaluations.
    """
    params = table.params if params is None else params
    V = default_v()
    T_range = cfg.N * cfg.t**cfg.eps / (cfg.Q * C)
    piece = next(pc for pc in build_partition(T_range) if pc.J == J)
    n_top = int(np.floor(cfg.n_max()))
    pref = cfg.N ** 0.5 * np.exp(-1j * cfg.t * np.log(cfg.N)) / TWO_PI
    terms = {}
    for q, r, a in dual_pairs(cfg, C):
        ra = r * a
        lo, hi = piece.weight.support
        cuts = sorted({lo, hi, *[b for b in (0.0, cfg.t / (ra - 1.0) if ra > 1 else 0.0) if lo < b < hi]})
        for sign in (1, -1):
            for n1 in [d for d in range(1, q + 1) if q % d == 0]:
                qh = q // n1
                rbar = modinv(r % qh, qh) if qh > 1 else 0
                for n2 in range(1, n_top // (n1 * n1) + 1):
                    lam = complex(table(n2, n1))
                    if lam == 0:
                        continue
                    k = kloosterman(rbar, sign * n2, qh) if qh > 1 else 1.0
                    c = lam / np.sqrt(n2) * k / (a * q**1.5)
                    logn = np.log(n1 * n1 * n2 * cfg.N / q**3)

                    def g(tau, sign=sign, logn=logn):
                        tau = np.atleast_1d(tau)
                        m = np.array([i1_main(SpParams(q=q, a=a, r=r, t=cfg.t, tau=float(x), N=cfg.N, C=C,
                                                       Q=cfg.Q, eps=cfg.eps), V) for x in tau])
                        return np.exp(-1j * tau * logn) * gamma_pm(-0.5 + 1j * tau, sign, params) * m \
                            * piece.weight(tau)

                    val = sum(quad_osc_1d(g, None, (x0, x1), tol=tol, min_panels=4).value
                              for x0, x1 in zip(cuts[:-1], cuts[1:]))
                    terms[(q, r, sign, n1, n2)] = pref * c * val
    return ordered_sum(terms)


def s2_envelope(cfg: PipelineConfig) -> float:
    """N Q t^eps (N^(1/2) / Q^(5/2) + t^(1/2) Q^(1/2) / N)."""
    N, Q, t, eps = cfg.N, cfg.Q, cfg.t, cfg.eps
    return N * Q * t**eps * (N**0.5 / Q**2.5 + t**0.5 * Q**0.5 / N)


__all__ = ["SncTerms", "dual_pairs", "snc_assemble", "s1_piece_adaptive", "s2_envelope"]
