"""Oscillation-aware adaptive Gauss-Legendre quadrature.

This is the ground-truth oracle every asymptotic formula is checked against.
Panels are first laid out so that each carries at most about one cycle of the
phase, then bisected wherever a 16-point rule and its two-halves refinement
disagree by more than the panel's share of the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import QuadratureNonConvergence

GL_ORDER = 16
DEFAULT_BUDGET = 2**22
_ROUNDOFF = 100 * np.finfo(float).eps

_X, _W = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass
class OscResult:
    value: complex
    err_est: float
    node_count: int

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


def gl_grid(lo, hi, panels=1, order=GL_ORDER):
    """Nodes and weights of a composite Gauss-Legendre rule on [lo, hi]."""
    if order == GL_ORDER:
        x, w = _X, _W
    else:
        x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _phase_fn(f):
    if f is None:
        return None
    return getattr(f, "f", f)


def _breakpoints(phase, lo, hi, min_panels, samples=2049):
    uniform = np.linspace(lo, hi, min_panels + 1)
    if phase is None:
        return uniform
    xs = np.linspace(lo, hi, samples)
    fs = np.asarray(phase(xs), dtype=float)
    var = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(fs)))])
    cycles = var[-1]
    n = int(np.ceil(cycles))
    if n <= 1:
        return uniform
    levels = np.linspace(0.0, cycles, n + 1)
    pts = np.interp(levels, var, xs)
    return np.unique(np.concatenate([pts, uniform]))


def _integrand(g, phase):
    def h(x):
        gx = np.asarray(g(x))
        if phase is None:
            return gx.astype(complex)
        return gx * np.exp(2j * np.pi * np.asarray(phase(x), dtype=float))

    return h


def _panel_rule(h, lo, hi, with_abs=False):
    """One 16-point rule per panel, vectorized over all panels."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _X[None, :]
    vals = h(nodes.ravel()).reshape(nodes.shape)
    if with_abs:
        return half * (vals @ _W), half * (np.abs(vals) @ _W)
    return half * (vals @ _W)


def quad_osc_1d(g, f, interval, tol=1e-10, budget=DEFAULT_BUDGET, min_panels=8, hint=None):
    """Adaptive quadrature of int g(x) e(f(x)) dx over ``interval``.

    ``g`` is any vectorized callable (real or complex). ``f`` is a phase in
    cycles: a vectorized callable, a ``PhaseSpec``, or ``None`` for no
    oscillation. ``hint`` is an optional phase used only to lay out the
    initial panels, for integrands whose oscillation lives inside ``g``.
    Raises ``QuadratureNonConvergence`` when more than ``budget`` integrand
    evaluations would be needed.
    """
    lo, hi = map(float, interval)
    if hi == lo:
        return OscResult(0j, 0.0, 1)
    sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0
    phase = _phase_fn(f)
    h = _integrand(g, phase)
    edges = _breakpoints(phase if hint is None else _phase_fn(hint), lo, hi, min_panels)
    a, b = edges[:-1], edges[1:]
    total_len = hi - lo
    # rounding in e(f) grows with |f|, so the floor scales with the phase size
    floor = _ROUNDOFF
    if phase is not None:
        floor *= 1.0 + 2 * np.pi * float(np.max(np.abs(phase(edges))))
    value, err, nodes = 0j, 0.0, 0
    while a.size:
        nodes += 3 * GL_ORDER * a.size
        if nodes > budget:
            raise QuadratureNonConvergence(
                f"quad_osc_1d exceeded {budget} nodes on [{lo}, {hi}] (tol={tol:g})"
            )
        m = 0.5 * (a + b)
        coarse, mag = _panel_rule(h, a, b, with_abs=True)
        fine = _panel_rule(h, a, m) + _panel_rule(h, m, b)
        e = np.abs(fine - coarse)
        share = 0.5 * tol * (b - a) / total_len
        # below ~100 ulp of the panel's absolute mass the difference is rounding
        done = (e <= np.maximum(share, floor * mag)) | ((b - a) <= 1e-13 * max(1.0, abs(hi)))
        value += fine[done].sum()
        err += e[done].sum()
        a = np.concatenate([a[~done], m[~done]])
        b = np.concatenate([m[~done], b[~done]])
    return OscResult(sign * complex(value), float(err), nodes)


def quad_fixed(g, f, interval, panels, order=GL_ORDER):
    """Non-adaptive composite rule (used for refinement-agreement checks)."""
    x, w = gl_grid(interval[0], interval[1], panels, order)
    return complex(np.sum(_integrand(g, _phase_fn(f))(x) * w))


def _axis_panels(phase2, rect, axis, min_panels, samples=129):
    (a, b), (c, d) = rect
    xs = np.linspace(a, b, samples)
    ys = np.linspace(c, d, samples)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    F = np.asarray(phase2(X, Y), dtype=float)
    var = np.abs(np.diff(F, axis=axis)).sum(axis=axis).max()
    return max(min_panels, int(np.ceil(var)))


def quad_osc_2d(g2, f2, rect, tol=1e-8, budget=2**27, min_panels=4, max_doublings=6):
    """Tensor Gauss-Legendre quadrature of the double integral of g2 e(f2) over ``rect``.

    Panels start at about one phase cycle each. On each layout a 16-point
    and a 24-point tensor rule are compared; the panel counts double until
    they agree within tol/2, and that difference is ``err_est``.
    """
    (a, b), (c, d) = rect
    phase = _phase_fn(f2)
    if phase is None:
        nx = ny = min_panels
    else:
        nx = _axis_panels(phase, rect, 0, min_panels)
        ny = _axis_panels(phase, rect, 1, min_panels)

    def evaluate(nx, ny, order):
        xs, wx = gl_grid(a, b, nx, order)
        ys, wy = gl_grid(c, d, ny, order)
        total = 0j
        chunk = max(1, 2_000_000 // max(ys.size, 1))
        for i in range(0, xs.size, chunk):
            X, Y = np.meshgrid(xs[i : i + chunk], ys, indexing="ij")
            vals = np.asarray(g2(X, Y), dtype=complex)
            if phase is not None:
                vals = vals * np.exp(2j * np.pi * np.asarray(phase(X, Y), dtype=float))
            total += wx[i : i + chunk] @ vals @ wy
        return complex(total), xs.size * ys.size

    nodes = 0
    for _ in range(max_doublings + 1):
        if nodes + (16 * 16 + 24 * 24) * nx * ny > budget:
            break
        lo_val, n1 = evaluate(nx, ny, GL_ORDER)
        hi_val, n2 = evaluate(nx, ny, 24)
        nodes += n1 + n2
        diff = abs(hi_val - lo_val)
        if diff <= 0.5 * tol:
            return OscResult(hi_val, diff, nodes)
        nx, ny = 2 * nx, 2 * ny
    raise QuadratureNonConvergence(f"quad_osc_2d did not reach tol={tol:g} within {budget} nodes")
