"""Compactly supported C-infinity weights with exact derivatives.

Derivatives come from truncated Taylor arithmetic (``Jet``): every weight is
built from +, *, /, exp and log of the coordinate, and the recurrences for
those operations give the Taylor coefficients to any order exactly (up to
rounding). No finite differences are involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable

import numpy as np

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

# exp(-700) is the last normal double; past it values and all derivatives are 0
_CUT = 700.0


class Jet:
    """Truncated Taylor expansion, vectorized over points.

    ``c[k]`` is f^(k)(x) / k! at every point x; shape (order+1, npts).
    """

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = np.asarray(c)

    @classmethod
    def variable(cls, x, order):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, v, like):
        c = np.zeros_like(like.c)
        c[0] = v
        return cls(c)

    @property
    def order(self):
        return self.c.shape[0] - 1

    def derivatives(self):
        k = np.array([factorial(i) for i in range(self.order + 1)], dtype=float)
        return self.c * k.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def _wrap(self, other):
        return other if isinstance(other, Jet) else Jet.constant(other, self)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c)
        c = self.c.copy()
        c[0] = c[0] + other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b = self.c, other.c
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
        for k in range(out.shape[0]):
            for i in range(k + 1):
                out[k] += a[i] * b[k - i]
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.c
        b = np.zeros_like(a, dtype=np.result_type(a, float))
        b[0] = 1.0 / a[0]
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(b[0])
            for j in range(1, k + 1):
                acc += a[j] * b[k - j]
            b[k] = -acc * b[0]
        return Jet(b)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def exp(self):
        a = self.c
        b = np.zeros_like(a, dtype=np.result_type(a, float))
        b[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(b[0])
            for j in range(1, k + 1):
                acc += j * a[j] * b[k - j]
            b[k] = acc / k
        return Jet(b)

    def log(self):
        a = self.c
        b = np.zeros_like(a, dtype=np.result_type(a, float))
        b[0] = np.log(a[0])
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(b[0])
            for j in range(1, k):
                acc += j * b[j] * a[k - j]
            b[k] = (a[k] - acc / k) / a[0]
        return Jet(b)

    def power(self, p):
        """self**p for real p, self > 0."""
        return (self.log() * p).exp()

    def masked(self, mask, fill_value=0.0):
        """Jet equal to this one where ``mask`` and constant ``fill_value`` elsewhere."""
        c = np.zeros_like(self.c)
        c[0] = fill_value
        c[:, mask] = self.c[:, mask]
        return Jet(c)


def _interior(x: Jet, lo: float, hi: float):
    return (x.c[0] > lo) & (x.c[0] < hi)


def bump_jet(x: Jet, a: float, b: float) -> Jet:
    """exp(1 - 1/(1-u^2)) with u the affine image of [a, b] onto [-1, 1]; peak 1 at the midpoint."""
    u = (x * 2.0 - (a + b)) / (b - a)
    w = 1.0 - u * u
    ok = w.c[0] > 1.0 / _CUT
    safe = Jet(np.where(ok, w.c, np.eye(w.order + 1, 1).reshape((-1,) + (1,) * (w.c.ndim - 1))))
    val = (1.0 - safe.reciprocal()).exp()
    return val.masked(ok, 0.0)


def step_jet(x: Jet, a: float, b: float) -> Jet:
    """Smooth monotone step: 0 for x <= a, 1 for x >= b."""
    u = (x - a) / (b - a)
    u0 = u.c[0]
    inside = (u0 > 1.0 / _CUT) & (u0 < 1.0 - 1.0 / _CUT)
    uu = Jet(np.where(inside, u.c, _half_const(u)))
    h = uu.reciprocal() - (1.0 - uu).reciprocal()
    s = ((h.exp() + 1.0).reciprocal())
    return s.masked(inside, 0.0) + Jet.constant(np.where(u0 >= 1.0 - 1.0 / _CUT, 1.0, 0.0), u).masked(~inside, 0.0)


def _half_const(u: Jet):
    c = np.zeros_like(u.c)
    c[0] = 0.5
    return c


@dataclass
class SmoothWeight:
    """A compactly supported smooth weight with exact derivatives.

    Parameters
    ----------
    support : (lo, hi)
        Closed support; the weight and all derivatives vanish at both ends.
    builder : callable
        Maps a ``Jet`` in the coordinate to a ``Jet`` of the weight.
    profile : {"flat", "dyadic"}
        ``flat``: |W^(j)| <= C_j. ``dyadic``: |x^k W^(k)| <= C_k.
    j_max : int
        Highest derivative order offered.
    """

    support: tuple[float, float]
    builder: Callable[[Jet], Jet]
    profile: str = "flat"
    j_max: int = 6
    name: str = field(default="weight")
    mellin: Callable | None = None

    def jet(self, x, order=None) -> Jet:
        order = self.j_max if order is None else order
        xj = Jet.variable(x, order)
        return self.builder(xj)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        val = self.jet(x.ravel(), 0).c[0]
        return val.reshape(x.shape)

    def derivative(self, x, k):
        if k > self.j_max:
            raise ValueError(f"derivative order {k} > j_max={self.j_max}")
        x = np.asarray(x, dtype=float)
        d = self.jet(x.ravel(), k).derivatives()[k]
        return d.reshape(x.shape)

    def variation(self, npts=4001):
        """Total variation, int |W'| over the support."""
        lo, hi = self.support
        xs = np.linspace(lo, hi, npts)
        d = np.abs(self.derivative(xs, 1))
        return float(_trapezoid(d, xs))

    def derivative_bound(self, k, npts=4001):
        """max over support of |W^(k)| (flat) or |x^k W^(k)| (dyadic)."""
        lo, hi = self.support
        xs = np.linspace(lo, hi, npts)
        d = np.abs(self.derivative(xs, k))
        if self.profile == "dyadic":
            d = d * np.abs(xs) ** k
        return float(d.max())


def bump(a: float, b: float, height: float = 1.0) -> SmoothWeight:
    """Standard bump on [a, b] with maximum ``height`` at the midpoint."""
    return SmoothWeight((a, b), lambda x: bump_jet(x, a, b) * height, "flat", name=f"bump[{a},{b}]")


def plateau(a: float, b: float, c: float, d: float) -> SmoothWeight:
    """Supported on [a, d], identically 1 on [b, c]."""

    def build(x):
        return step_jet(x, a, b) * (1.0 - step_jet(x, c, d))

    return SmoothWeight((a, d), build, "flat", name=f"plateau[{a},{b},{c},{d}]")


def default_u() -> SmoothWeight:
    """U: supported on [1/2, 5/2], equal to 1 on [1, 2]."""
    return plateau(0.5, 1.0, 2.0, 2.5)


def default_v() -> SmoothWeight:
    """V: bump supported on [1, 2]."""
    return bump(1.0, 2.0)


def log_normal(center: float, width: float = 0.4, reach: float = 9.0) -> SmoothWeight:
    """exp(-(log(x/center))^2 / (2 width^2)) with the closed-form Mellin transform.

    ``mellin(s)`` = int_0^inf W(x) x^(s-1) dx = center^s sqrt(2 pi) width exp(width^2 s^2 / 2).
    The weight is not compactly supported; ``support`` is the window
    |log(x/center)| <= reach * width, outside which W < exp(-reach^2 / 2).
    """
    c = np.log(center)

    def build(x):
        u = x.log() - c
        return (u * u * (-0.5 / width**2)).exp()

    def mellin(s):
        s = np.asarray(s, dtype=complex)
        return np.sqrt(2 * np.pi) * width * np.exp(s * c + 0.5 * width**2 * s * s)

    span = reach * width
    return SmoothWeight((float(center * np.exp(-span)), float(center * np.exp(span))), build, "dyadic",
                        name=f"lognormal[{center},{width}]", mellin=mellin)
