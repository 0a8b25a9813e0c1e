"""Asymptotic expansions and bounds for one- and two-dimensional oscillatory integrals.

All phases are in cycles: the integrals are of g(x) e(f(x)) with
e(z) = exp(2 pi i z). Each expansion returns an ``Expansion`` carrying the
main term and an explicit error envelope with implied constant 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    ConditionFViolated,
    DegenerateDerivative,
    InputError,
    NonPositiveSecondDerivative,
    NoInteriorStationaryPoint,
    StationaryPointInside,
)
from ..smooth import _trapezoid
from .quadrature import OscResult

_GRID = 4097


@dataclass
class Expansion(OscResult):
    """Main term of an asymptotic expansion plus its error envelope.

    ``value`` is the main term and ``err_est`` the envelope; ``hypotheses``
    records the numerically checked side conditions.
    """

    hypotheses: dict = field(default_factory=dict)


def _grid(interval, n=_GRID):
    a, b = map(float, interval)
    return np.linspace(a, b, n)


def _variation(g, interval, n=_GRID):
    """Total variation of g extended by zero outside ``interval``."""
    xs = _grid(interval, n)
    gx = np.asarray(g(xs))
    return float(np.abs(gx[0]) + np.abs(np.diff(gx)).sum() + np.abs(gx[-1]))


def derivative_test_bound(g, f, interval, r: int) -> float:
    """r-th derivative test: Var(g) / min |f^(r)|^(1/r).

    For r = 1 this presumes f' monotone, as in the classical first
    derivative test. ``f`` is a ``PhaseSpec``.
    """
    if r < 1:
        raise InputError("derivative order must be >= 1")
    fr = np.abs(np.asarray(f.d(r, _grid(interval))))
    m = float(fr.min())
    if m <= 0:
        raise DegenerateDerivative(f"f^({r}) vanishes on {interval}")
    return _variation(g, interval) / m ** (1.0 / r)


def _sign_changes(v):
    s = np.sign(v)
    return bool(np.any(s == 0) or np.any(s[1:] != s[:-1]))


def huxley_boundary(g, f, interval, omega_ratio: float = 0.05) -> Expansion:
    """Boundary-term expansion when f' has no zero on [a, b].

    main = g(b) e(f(b)) / (2 pi i f'(b)) - g(a) e(f(a)) / (2 pi i f'(a)),
    err = Theta / (Omega^2 Lambda^3) (1 + Omega/Omega_g + Omega^2 Lambda / (Omega_g^2 Theta/Omega)).

    Raises ``StationaryPointInside`` if f' changes sign and
    ``DegenerateDerivative`` if f'' changes sign (a vanishing f'' such as a
    linear phase is accepted). ``omega_ratio`` is the constant in the
    requirement Omega_f >= omega_ratio (b - a).
    """
    a, b = map(float, interval)
    xs = _grid(interval)
    f1 = np.asarray(f.d(1, xs))
    if _sign_changes(f1):
        raise StationaryPointInside(f"f' vanishes on [{a}, {b}]")
    f2 = np.asarray(f.d(2, xs))
    if np.any(f2 != 0) and _sign_changes(f2[np.abs(f2) > 1e-14 * np.abs(f2).max()]):
        raise DegenerateDerivative(f"f'' changes sign on [{a}, {b}]")
    if f.omega_f < omega_ratio * (b - a):
        raise InputError(f"Omega_f={f.omega_f} too small for an interval of length {b - a}")
    lam = f.lam if f.lam is not None else float(np.abs(f1).min())
    th, om, og = f.theta, f.omega_f, f.omega_g

    def term(x):
        return complex(np.asarray(g(np.array([x])))[0]) * np.exp(2j * np.pi * float(f(x))) / (
            2j * np.pi * float(f.d(1, x))
        )

    main = term(b) - term(a)
    err = th / (om**2 * lam**3) * (1 + om / og + om**2 / og**2 * lam / (th / om))
    return Expansion(main, float(err), 2, {"lambda": lam})


def _bisect_root(fn, a, b, iters=200):
    fa = fn(a)
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = fn(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
        if b - a <= 4e-16 * max(1.0, abs(m)):
            break
    return 0.5 * (a + b)


def stationary_point(f, interval) -> float:
    """The zero of f' on ``interval`` where f' goes from negative to positive."""
    a, b = map(float, interval)
    xs = _grid(interval)
    f1 = np.asarray(f.d(1, xs))
    idx = np.nonzero((f1[:-1] < 0) & (f1[1:] >= 0))[0]
    if idx.size != 1 or f1[0] >= 0 or f1[-1] <= 0:
        raise NoInteriorStationaryPoint(f"f' does not cross zero upward inside [{a}, {b}]")
    i = int(idx[0])
    return _bisect_root(lambda x: float(f.d(1, x)), xs[i], xs[i + 1])


def huxley_stationary(g, f, interval) -> Expansion:
    """Stationary-phase expansion with one interior stationary point x0.

    main = g(x0) e(f(x0) + 1/8) / sqrt(f''(x0)),
    err = Omega^4 / (Theta^2 kappa^3) + Omega / Theta^(3/2) + Omega^3 / (Theta^(3/2) Omega_g^2),
    with kappa = min(b - x0, x0 - a) unless ``f.kappa`` is set.
    """
    a, b = map(float, interval)
    x0 = stationary_point(f, interval)
    f2x0 = float(f.d(2, x0))
    th, om, og = f.theta, f.omega_f, f.omega_g
    # a root located only to bisection accuracy leaves f'' ~ 1e-10 at a degenerate point
    if f2x0 <= 1e-8 * th / om**2:
        raise NonPositiveSecondDerivative(f"f''(x0) = {f2x0}")
    xs = _grid(interval)
    ratio = float(np.asarray(f.d(2, xs)).min() / (th / om**2))
    kappa = f.kappa if f.kappa is not None else min(b - x0, x0 - a)
    gx0 = complex(np.asarray(g(np.array([x0])))[0])
    main = gx0 * np.exp(2j * np.pi * (float(f(x0)) + 0.125)) / np.sqrt(f2x0)
    err = om**4 / (th**2 * kappa**3) + om / th**1.5 + om**3 / (th**1.5 * og**2)
    return Expansion(main, float(err), 1, {"x0": x0, "kappa": kappa, "f2_ratio_min": ratio})


def bky_negligible(f, interval, A: int = 6) -> float:
    """Non-stationary bound |b-a| [ (Omega_f Lambda / sqrt(Theta))^-A + (Lambda Omega_g)^-A ].

    Requires Theta_f >= 1 and f' of one sign; Lambda is min |f'| unless
    ``f.lam`` is set.
    """
    a, b = map(float, interval)
    if f.theta < 1:
        raise InputError("bky_negligible needs Theta_f >= 1")
    f1 = np.asarray(f.d(1, _grid(interval)))
    if _sign_changes(f1):
        raise StationaryPointInside(f"f' vanishes on [{a}, {b}]")
    lam = f.lam if f.lam is not None else float(np.abs(f1).min())
    return (b - a) * ((f.omega_f * lam / np.sqrt(f.theta)) ** -A + (lam * f.omega_g) ** -A)


def mixed_variation(g2, rect, n=513) -> float:
    """var(g) = double integral of |d^2 g / dx dy| over ``rect`` by centred differences.

    ``g2`` may also expose ``mixed(x, y)`` returning the exact mixed partial.
    """
    (a, b), (c, d) = rect
    xs = np.linspace(a, b, n)
    ys = np.linspace(c, d, n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    if hasattr(g2, "mixed"):
        m = np.abs(g2.mixed(X, Y))
        return float(_trapezoid(_trapezoid(m, ys, axis=1), xs))
    G = np.asarray(g2(X, Y))
    m = np.abs(np.diff(np.diff(G, axis=0), axis=1))
    return float(m.sum())


def second_deriv_bound_2d(g2, f2, rect, p1: float | None = None, p2: float | None = None,
                          margin: float = 1.0, n=129) -> Expansion:
    """Two-dimensional second derivative bound var(g) / (p1 p2).

    ``f2`` is a ``PhaseSpec2D``. When p1, p2 are omitted they are taken as
    sqrt(min f_xx) and sqrt(min f_yy) over the grid. The condition
    f_xx >= p1^2, f_yy >= p2^2, det >= p1^2 p2^2 (times ``margin``) is
    checked on an n x n grid; a violation warns with ``ConditionFViolated``
    and the bound is still returned.
    """
    (a, b), (c, d) = rect
    X, Y = np.meshgrid(np.linspace(a, b, n), np.linspace(c, d, n), indexing="ij")
    fxx = np.asarray(f2.fxx(X, Y)) + 0 * X
    fyy = np.asarray(f2.fyy(X, Y)) + 0 * X
    det = fxx * fyy - (np.asarray(f2.fxy(X, Y)) + 0 * X) ** 2
    if p1 is None:
        p1 = float(np.sqrt(max(np.abs(fxx).min(), 0.0)))
    if p2 is None:
        p2 = float(np.sqrt(max(np.abs(fyy).min(), 0.0)))
    slack = margin * (1 - 1e-12)
    ok = (
        np.all(np.abs(fxx) >= slack * p1**2)
        and np.all(np.abs(fyy) >= slack * p2**2)
        and np.all(np.abs(det) >= slack * (p1 * p2) ** 2)
    )
    if not ok:
        warnings.warn(f"second-derivative condition fails on {rect} for p1={p1:g}, p2={p2:g}",
                      ConditionFViolated, stacklevel=2)
    if p1 <= 0 or p2 <= 0:
        raise DegenerateDerivative("p1 and p2 must be positive")
    var = mixed_variation(g2, rect)
    return Expansion(0j, var / (p1 * p2), 0, {"p1": p1, "p2": p2, "var": var, "condition": bool(ok)})
