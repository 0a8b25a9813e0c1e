"""Smoothed Dirichlet-series evaluation of L(s) on the critical strip."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ContourOutOfRange, InsufficientData
from ..oscillatory.quadrature import OscResult, gl_grid
from .coefficients import CoefficientTable
from .gamma import gamma_gl3
from .params import GL3Params


def gaussian_g(width: float = 1.0) -> Callable:
    """G(u) = exp(u^2 / width)."""

    def g(u, s):
        return np.exp(u * u / width)

    g.width = width
    return g


def pole_killing_g(width: float = 1.0, alpha=(0.0, 0.0, 0.0)) -> Callable:
    """G(u) = exp(u^2/width) prod_i (u^2 - (1+alpha_i-s)^2)(u^2 - (alpha_i-s)^2) / ((1+alpha_i-s)^2 (alpha_i-s)^2).

    Even, G(0) = 1, and zero at u = +-(alpha_i - s), +-(1 + alpha_i - s), where the
    poles of prod zeta(s + u - alpha_i) and its Gamma_R factors would otherwise
    leave residues. At alpha = 0 the zeros are triple.
    """
    alpha = np.asarray(alpha, dtype=complex)

    def g(u, s):
        out = np.exp(u * u / width)
        for a in alpha:
            one, zero = 1 + a - s, a - s
            out = out * (u * u - one**2) * (u * u - zero**2) / (one**2 * zero**2)
        return out

    g.width = width
    return g


@dataclass
class AFEConfig:
    """Evaluation point, weight G(u, s), contour Re u = ``contour_sigma`` and truncation.

    ``truncation=None`` picks the length from a tail estimate below ``tail_tol``.
    """

    s: complex
    G: Callable = gaussian_g(4.0)
    contour_sigma: float = 2.0
    truncation: int | None = None
    tail_tol: float = 1e-10
    v_max: float | None = None
    panel_width: float = 0.25

    def __post_init__(self):
        if not 0 < self.contour_sigma <= 4:
            raise ContourOutOfRange("contour must satisfy 0 < Re u <= 4")
        g0 = complex(self.G(np.array([1e-300 + 0j]), complex(self.s))[0])
        if abs(g0 - 1) > 1e-12:
            raise ContourOutOfRange(f"G(0) = {g0}, expected 1")


def _kernel_nodes(s: complex, p: GL3Params, cfg: AFEConfig, doubling: int):
    """Nodes u_j on Re u = c and weights w_j K(u_j) / 2 pi with K = G(u) gamma(s+u)/gamma(s)/u."""
    c = cfg.contour_sigma
    # |G| ~ exp(-v^2/width) must beat the gamma-ratio growth exp(3 pi |v| / 4)
    width = getattr(cfg.G, "width", 1.0)
    vmax = cfg.v_max if cfg.v_max is not None else 9.0 * np.sqrt(width) + 2.5 * width
    panels = int(np.ceil(2 * vmax / cfg.panel_width)) * 2**doubling
    v, w = gl_grid(-vmax, vmax, panels)
    u = c + 1j * v
    lg = gamma_gl3(s + u, p) - gamma_gl3(s, p)[0]
    k = cfg.G(u, s) * np.exp(lg) / u
    return u, w * k / (2 * np.pi)


def v_s(y, s: complex, p: GL3Params, cfg: AFEConfig):
    """V_s(y) = (1/2 pi i) int_(c) y^-u G(u) gamma(s+u)/gamma(s) du/u."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    u, wk = _kernel_nodes(complex(s), p, cfg, 0)
    return np.exp(-np.log(y)[:, None] * u[None, :]) @ wk


def _tail_estimate(n: int, s: complex, p: GL3Params, cfg: AFEConfig, theta: float) -> float:
    """Estimate of sum_{n'>n} |coef(n')| |n'^-s V_s(n')| with |coef(n)| <= d3(n) n^theta.

    V_s is evaluated on a geometric grid beyond n on the contour Re u = 4, where
    it is computed most accurately, and the sum is replaced by a Riemann sum with
    the mean size (log y + 1)^2 of d3. Each grid value also carries its rounding
    floor 1e-15 y^-4 int|K|.
    """
    probe = AFEConfig(s=s, G=cfg.G, contour_sigma=4.0, v_max=cfg.v_max, panel_width=cfg.panel_width)
    u, wk = _kernel_nodes(s, p, probe, 0)
    floor = 1e-15 * float(np.sum(np.abs(wk)))
    y = n * 1.25 ** np.arange(0, 200)
    y = y[y < 1e300 ** (1 / 8)]
    vals = np.abs(np.exp(-np.log(y)[:, None] * u[None, :]) @ wk) + floor * y**-4.0
    dy = 0.25 * y
    return float(np.sum(vals * y ** (theta - s.real) * (np.log(y) + 1) ** 2 * dy))


def _length(s: complex, p: GL3Params, cfg: AFEConfig, theta: float) -> int:
    """Smallest n (on a geometric grid) whose tail estimate is below ``cfg.tail_tol``."""
    n = 16
    while _tail_estimate(n, s, p, cfg, theta) >= cfg.tail_tol:
        n = int(n * 1.25) + 1
    return n


def _dirichlet_sum(coef: np.ndarray, s: complex, u: np.ndarray, wk: np.ndarray, chunk: int = 2048) -> complex:
    """sum_j wk_j sum_n coef_n n^(-s-u_j), chunked over n."""
    total = 0j
    n_max = coef.size - 1
    for lo in range(1, n_max + 1, chunk):
        n = np.arange(lo, min(lo + chunk, n_max + 1), dtype=float)
        ln = np.log(n)
        mat = np.exp(-np.outer(ln, s + u))
        total += coef[lo : lo + n.size] @ (mat @ wk)
    return complex(total)


def _one_sum(coef_source, s, p, cfg, theta):
    u, wk = _kernel_nodes(s, p, cfg, 0)
    n_max = cfg.truncation or _length(s, p, cfg, theta)
    coef = coef_source(n_max)
    val = _dirichlet_sum(coef, s, u, wk)
    u2, wk2 = _kernel_nodes(s, p, cfg, 1)
    val2 = _dirichlet_sum(coef, s, u2, wk2)
    tail = _tail_estimate(n_max, s, p, cfg, theta)
    return val2, abs(val2 - val) + tail, n_max


def afe_value(table: CoefficientTable, p: GL3Params | None, cfg: AFEConfig) -> OscResult:
    """L(s) = sum lambda(1,n) n^-s V_s(n) + eps(s) sum lambda(n,1) n^-(1-s) V~_(1-s)(n).

    eps(s) = gamma(1-s, dual) / gamma(s), with gamma(s, p) = prod Gamma_R(s - alpha_i).
    The second sum is added for self-dual tables; otherwise a warning is issued
    and only the first sum is returned. With a G that vanishes at the poles of the
    completed L-function no residue term remains.
    """
    p = p or table.params
    s = complex(cfg.s)
    theta = float(np.max(np.abs(p.alpha.real)))
    heuristic = (1 + abs(s.imag)) ** 1.55
    v1, e1, n1 = _one_sum(lambda n: table.row(n), s, p, cfg, theta)
    if cfg.truncation is not None and cfg.truncation < heuristic:
        warnings.warn(f"truncation {cfg.truncation} below (1+|t|)^(3/2+eps) = {heuristic:.0f}", stacklevel=2)
    if not table.selfdual:
        warnings.warn("non-self-dual table: returning the first sum only", stacklevel=2)
        return OscResult(v1, e1, n1)
    dual = p.dual()
    sd = 1 - s
    eps = np.exp(gamma_gl3(sd, dual)[0] - gamma_gl3(s, p)[0])
    v2, e2, n2 = _one_sum(lambda n: table.col(n), sd, dual, cfg, theta)
    return OscResult(complex(v1 + eps * v2), float(e1 + abs(eps) * e2), n1 + n2)
