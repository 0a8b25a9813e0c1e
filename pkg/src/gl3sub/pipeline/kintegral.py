"""The double tau-integral K of the off-diagonal main-term analysis, its phase and its envelope B*."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import mpmath as mp
import numpy as np

from ..arith import modinv
from ..errors import BudgetExceeded, InputError, WindowViolation
from ..gl3.gamma import CARRIER_SCALE, stirling_phi
from ..gl3.params import TRIVIAL, GL3Params
from ..oscillatory.partition import build_partition
from ..oscillatory.phase import PhaseSpec2D
from ..oscillatory.quadrature import gl_grid, quad_osc_2d
from ..oscillatory.sp import C2, v0
from ..smooth import default_u, default_v
from .config import PipelineConfig

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class KTuple:
    """One (q1, q2, r1, r2, n2, L, J) sample; a1, a2 follow from the inverse of -r mod q."""

    q1: int
    q2: int
    r1: int
    r2: int
    n2: int
    L: float
    J: float
    J2: float | None = None

    @property
    def second_window(self) -> float:
        return self.J if self.J2 is None else self.J2


@dataclass(frozen=True)
class KResult:
    value: complex
    err_est: float
    bstar: float
    ratio: float
    nodes: int


def dual_a(q: int, r: int, Q: int) -> int:
    """a in (Q, q + Q] with a r = -1 mod q."""
    if gcd(r, q) != 1:
        raise InputError(f"gcd({r}, {q}) != 1")
    a0 = modinv((-r) % q, q) if q > 1 else 0
    return Q + 1 + ((a0 - Q - 1) % q)


# ---------------------------------------------------------------- phase and Hessian


def phase_2pi_f(tau1, tau2, q1, q2, r1, r2, n2, L, N, t, y=0.0, scale=CARRIER_SCALE):
    """2 pi f(tau1, tau2): carriers of both gamma factors, the (LN) and q twists, both
    main-term phases and, for n2 != 0, the stationary phase of the U-dagger factor.

    Works with mpmath numbers as well as numpy arrays.
    """
    lib = mp if isinstance(tau1, mp.mpf) else np
    d = tau2 - tau1
    out = (3 * tau1 * lib.log(abs(tau1) / (lib.e * scale)) - 3 * tau2 * lib.log(abs(tau2) / (lib.e * scale))
           - (tau1 - tau2) * lib.log(L * N) + 3 * tau1 * lib.log(q1) - 3 * tau2 * lib.log(q2)
           - (t + tau1) * lib.log((t + tau1) * q1 / (TWO_PI * lib.e * N * abs(r1)))
           + (t + tau2) * lib.log((t + tau2) * q2 / (TWO_PI * lib.e * N * abs(r2))))
    if n2:
        out = out + d * lib.log(abs(d) * q1 * q2 / (TWO_PI * lib.e * abs(n2) * L)) + d * q1 * q2 * y / (n2 * L)
    return out


def hessian_2pi_f(tau1, tau2, t):
    """(d11, d22, d12) of 2 pi f with n2 != 0."""
    d = tau2 - tau1
    return (3 / tau1 - 1 / (t + tau1) + 1 / d, -3 / tau2 + 1 / (t + tau2) + 1 / d, 1 / (tau1 - tau2))


def hessian_det_4pi2(tau1, tau2, t):
    """4 pi^2 (f11 f22 - f12^2), close to -6 / (tau1 tau2) when |tau| << t."""
    h11, h22, h12 = hessian_2pi_f(tau1, tau2, t)
    return h11 * h22 - h12**2


def hessian_fd(tau1, tau2, args, h=1e-6, dps=40):
    """Central second differences of :func:`phase_2pi_f` in mpmath at ``dps`` digits."""
    with mp.workdps(dps):
        a, b, hh = mp.mpf(tau1), mp.mpf(tau2), mp.mpf(h)

        def F(x, y):
            return phase_2pi_f(x, y, *args)

        d11 = (F(a + hh, b) - 2 * F(a, b) + F(a - hh, b)) / hh**2
        d22 = (F(a, b + hh) - 2 * F(a, b) + F(a, b - hh)) / hh**2
        d12 = (F(a + hh, b + hh) - F(a + hh, b - hh) - F(a - hh, b + hh) + F(a - hh, b - hh)) / (4 * hh**2)
        return float(d11), float(d22), float(d12)


def k_phase(q1, q2, r1, r2, L, N, t, scale=CARRIER_SCALE) -> PhaseSpec2D:
    """The part of f carried by the two main terms (in cycles), for :func:`quad_osc_2d`."""

    def f(x, y):
        return phase_2pi_f(x, y, q1, q2, r1, r2, 0, L, N, t, scale=scale) / TWO_PI

    return PhaseSpec2D(
        f,
        lambda x, y: (3 / x - 1 / (t + x)) / TWO_PI,
        lambda x, y: (-3 / y + 1 / (t + y)) / TWO_PI,
        lambda x, y: 0.0 * x,
        name="k-main",
    )


# ---------------------------------------------------------------- weights


def _piece(cfg: PipelineConfig, C: float, J: float):
    T_range = cfg.N * cfg.t**cfg.eps / (cfg.Q * C)
    for pc in build_partition(T_range):
        if np.isclose(pc.J, J, rtol=1e-12, atol=0):
            return pc
    raise WindowViolation(f"J={J} is not a piece of the partition of [-{T_range:.6g}, {T_range:.6g}]")


def w_j_qr(q: int, r: int, a: int, tau, weight, cfg: PipelineConfig, V=None):
    """t / (t + tau)^(3/2) W_J(tau) V_0(3/2, q (t + tau) / 2 pi N |r|), zero where the main term is absent."""
    V = default_v() if V is None else V
    tau = np.asarray(tau, dtype=float)
    t = cfg.t
    y0 = q * (t + tau) / (TWO_PI * cfg.N * abs(r))
    live = (r * tau > 0) & (r * a * tau <= t + tau)
    return np.where(live, t / (t + tau) ** 1.5 * weight(tau) * v0(V, 1.5, y0), 0.0)


def _amplitude(q, r, a, tau, weight, cfg, L, params, scale):
    """Phi_+(tau) W_J(q, r, tau), the part of C2^-1 (t/ra) gamma_+ I_1 W_J twist left after removing e(phi)."""
    return stirling_phi(tau, 1, params, scale) * w_j_qr(q, r, a, tau, weight, cfg)


def _one_phase(q, r, tau, L, N, t, scale):
    return (3 * tau * np.log(np.abs(tau) / (np.e * scale)) - tau * np.log(L * N) + 3 * tau * np.log(q)
            - (t + tau) * np.log((t + tau) * q / (TWO_PI * np.e * N * abs(r))))


def bstar(cfg: PipelineConfig, C: float, n2: int, L: float) -> float:
    """B*(C, 0) = Q C t^eps / N t and B*(C, n2) = Q C^2 t^eps / (N t (|n2| L)^(1/2))."""
    base = cfg.Q * C * cfg.t**cfg.eps / (cfg.N * cfg.t)
    return base if n2 == 0 else base * C / np.sqrt(abs(n2) * L)


def _block(q1, q2):
    C = 2 ** int(np.floor(np.log2(q1)))
    if not C <= q2 < 2 * C:
        raise InputError(f"q1={q1} and q2={q2} lie in different dyadic blocks")
    return C


def _udagger_nodes(rho, tau_max, U, level):
    lo, hi = U.support
    cycles = abs(rho) * (hi - lo) + tau_max * np.log(hi / lo) / TWO_PI
    x, w = gl_grid(lo, hi, (int(np.ceil(cycles)) + 8) * level)
    return x, w * U(x) * np.exp(-TWO_PI * 1j * rho * x) / x


def _tau_nodes(lo, hi, q, r, L, cfg, scale, level, samples=4001):
    s = np.linspace(lo, hi, samples)
    cycles = np.abs(np.diff(_one_phase(q, r, s, L, cfg.N, cfg.t, scale))).sum() / TWO_PI
    return gl_grid(lo, hi, (int(np.ceil(cycles)) + 4) * level)


def k_integral(tp: KTuple, cfg: PipelineConfig, params: GL3Params = TRIVIAL, scale: float = CARRIER_SCALE,
               node_cap: int = 200_000_000) -> tuple[complex, float, int]:
    """K by factoring U-dagger through its quadrature nodes.

    With U-dagger(rho, i(tau2 - tau1)) = sum_k c_k x_k^(i tau2) x_k^(-i tau1) the
    double integral splits into one tau1-transform and one tau2-transform per
    node x_k. Returns (value, err_est, nodes); the estimate compares grids with
    doubled panel counts on every axis.
    """
    q1, q2, r1, r2 = tp.q1, tp.q2, tp.r1, tp.r2
    Q = int(cfg.Q)
    a1, a2 = dual_a(q1, r1, Q), dual_a(q2, r2, Q)
    C = _block(q1, q2)
    w1 = _piece(cfg, C, tp.J).weight
    w2 = _piece(cfg, C, tp.second_window).weight
    rho = tp.n2 * tp.L / (q1 * q2)
    U = default_u()
    const = abs(C2) ** 2 * r1 * r2 * a1 * a2 / cfg.t**2
    tau_max = max(abs(b) for b in (*w1.support, *w2.support))
    vals, nodes = [], 0
    for level in (1, 2):
        x, c = _udagger_nodes(rho, tau_max, U, level)
        logx = np.log(x)
        t1, v1 = _tau_nodes(*w1.support, q1, r1, tp.L, cfg, scale, level)
        t2, v2 = _tau_nodes(*w2.support, q2, r2, tp.L, cfg, scale, level)
        cost = x.size * (t1.size + t2.size)
        if nodes + cost > node_cap:
            raise BudgetExceeded(f"K needs {nodes + cost} node products, cap {node_cap}")
        A1 = v1 * _amplitude(q1, r1, a1, t1, w1, cfg, tp.L, params, scale) \
            * np.exp(1j * _one_phase(q1, r1, t1, tp.L, cfg.N, cfg.t, scale))
        A2 = v2 * _amplitude(q2, r2, a2, t2, w2, cfg, tp.L, params, scale) \
            * np.exp(1j * _one_phase(q2, r2, t2, tp.L, cfg.N, cfg.t, scale))
        F1 = np.exp(-1j * np.outer(logx, t1)) @ A1
        F2 = np.exp(-1j * np.outer(logx, t2)) @ A2
        vals.append(const * complex(np.sum(c * F1 * np.conj(F2))))
        nodes += cost
    return vals[1], abs(vals[1] - vals[0]), nodes


def k_integral_2d(tp: KTuple, cfg: PipelineConfig, params: GL3Params = TRIVIAL, scale: float = CARRIER_SCALE,
                  tol: float = 1e-12, budget: int = 2**24):
    """K by :func:`quad_osc_2d` with phase ``k_phase`` and weight
    Phi_+(tau1) conj Phi_+(tau2) W_J(q1, r1, tau1) W_J(q2, r2, tau2) U-dagger(rho, i(tau2 - tau1)),
    U-dagger summed exactly over its quadrature nodes at every mesh point.
    """
    q1, q2, r1, r2 = tp.q1, tp.q2, tp.r1, tp.r2
    Q = int(cfg.Q)
    a1, a2 = dual_a(q1, r1, Q), dual_a(q2, r2, Q)
    C = _block(q1, q2)
    w1 = _piece(cfg, C, tp.J).weight
    w2 = _piece(cfg, C, tp.second_window).weight
    rho = tp.n2 * tp.L / (q1 * q2)
    tau_max = max(abs(b) for b in (*w1.support, *w2.support))
    x, c = _udagger_nodes(rho, tau_max, default_u(), 2)
    logx = np.log(x)
    const = abs(C2) ** 2 * r1 * r2 * a1 * a2 / cfg.t**2

    def g2(X, Y):
        ud = np.exp(1j * (Y - X)[..., None] * logx) @ c
        return (_amplitude(q1, r1, a1, X, w1, cfg, tp.L, params, scale)
                * np.conj(_amplitude(q2, r2, a2, Y, w2, cfg, tp.L, params, scale)) * ud)

    res = quad_osc_2d(g2, k_phase(q1, q2, r1, r2, tp.L, cfg.N, cfg.t, scale), (w1.support, w2.support),
                      tol=tol / const, budget=budget)
    return const * res.value, const * res.err_est, res.node_count


def k_integral_check(q1: int, q2: int, r1: int, r2: int, n2: int, L: float, J: float, cfg: PipelineConfig,
                     params: GL3Params = TRIVIAL, J2: float | None = None) -> KResult:
    """K for one tuple with its envelope B*(C, n2) and the ratio |K| / B*.

    The tau-windows must be pieces of the partition of |tau| <= N t^eps / Q C.
    """
    tp = KTuple(q1, q2, r1, r2, n2, L, J, J2)
    C = _block(q1, q2)
    value, err, nodes = k_integral(tp, cfg, params)
    b = bstar(cfg, C, n2, L)
    return KResult(value, err, b, abs(value) / b, nodes)


def w_j_derivative_ratio(q: int, r: int, J: float, cfg: PipelineConfig, samples: int = 2001, h: float = 1e-3):
    """max over the window of |d/dtau W_J(q, r, tau)| t^(1/2) |tau| by central differences."""
    Q = int(cfg.Q)
    a = dual_a(q, r, Q)
    C = 2 ** int(np.floor(np.log2(q)))
    pc = _piece(cfg, C, J)
    lo, hi = pc.weight.support
    tau = np.linspace(lo, hi, samples)[1:-1]
    d = (w_j_qr(q, r, a, tau + h, pc.weight, cfg) - w_j_qr(q, r, a, tau - h, pc.weight, cfg)) / (2 * h)
    return float(np.max(np.abs(d) * np.sqrt(cfg.t) * np.abs(tau)))


def resonant_L(q: int, r: int, J: float, cfg: PipelineConfig, scale: float = CARRIER_SCALE) -> float:
    """The L at which the main-term phase of one side is stationary at tau = 7J/6:
    L N = (|tau| q / scale)^3 / y0."""
    tau = 7 * J / 6
    y0 = q * (cfg.t + tau) / (TWO_PI * cfg.N * abs(r))
    return float((abs(tau) * q / scale) ** 3 / (y0 * cfg.N))


def sample_tuples(cfg: PipelineConfig, C: int, count: int, seed: int, n2_max: int = 16) -> list[KTuple]:
    """Deterministic sample of tuples with nonzero main terms on both sides.

    q1, q2 in [C, min(2C, Q+1)); r < 0 with y0 inside supp V; J a negative piece
    of the partition (gamma_+ is exponentially small for tau > 0, and the main
    term needs r tau > 0); L the power of two nearest :func:`resonant_L`, moved
    by a factor in {1/2, 1, 2} and kept in [1, N^2 t^eps / Q^3]; n2 = 0 for
    about a quarter of the samples, otherwise |n2| up to the size where the
    U-dagger stationary point can still fall inside supp U.
    """
    rng = np.random.default_rng(seed)
    V = default_v()
    Q = int(cfg.Q)
    T_range = cfg.N * cfg.t**cfg.eps / (Q * C)
    js = [pc.J for pc in build_partition(T_range) if pc.J <= -2]
    L_top = cfg.n_max()
    live = []
    for q in range(C, min(2 * C, Q + 1)):
        for r in range(1, int(cfg.r_max(q)) + 1):
            if gcd(r, q) != 1:
                continue
            y0 = q * cfg.t / (TWO_PI * cfg.N * r)
            if V.support[0] < y0 < V.support[1]:
                live.append((q, -r))
    if not live:
        raise InputError("no (q, r) with a nonzero main term in this block")
    out = []
    while len(out) < count:
        (q1, r1), (q2, r2) = (live[i] for i in rng.integers(0, len(live), 2))
        J = float(js[rng.integers(0, len(js))])
        k = int(np.round(np.log2(resonant_L(q1, r1, J, cfg)))) + int(rng.integers(-1, 2))
        L = float(2.0 ** min(max(k, 0), int(np.floor(np.log2(L_top)))))
        if rng.random() < 0.25:
            out.append(KTuple(q1, q2, r1, r2, 0, L, J))
            continue
        top = max(1, min(n2_max, int(abs(J) * q1 * q2 / (3 * np.pi * L))))
        n2 = int(rng.integers(1, top + 1)) * (1 if rng.random() < 0.5 else -1)
        out.append(KTuple(q1, q2, r1, r2, n2, L, J))
    return out
