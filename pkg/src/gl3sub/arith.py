"""Modular and multiplicative arithmetic by direct enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import kernels
from .errors import InputError


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def modinv(a: int, m: int) -> int:
    """Inverse of a modulo m (m >= 1); raises if gcd(a, m) != 1."""
    if m == 1:
        return 0
    g, x, _ = egcd(a % m, m)
    if g != 1:
        raise InputError(f"{a} is not invertible mod {m}")
    return x % m


def num_divisors(n: int) -> int:
    n = abs(n)
    count, d = 0, 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@dataclass(frozen=True)
class KloostermanArgs:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise InputError(f"Kloosterman modulus must be >= 1, got {self.c}")


@dataclass(frozen=True)
class CharSumArgs:
    r1: int
    r2: int
    q1: int
    q2: int
    n1: int
    n2: int

    def __post_init__(self):
        if self.q1 < 1 or self.q2 < 1 or self.n1 < 1:
            raise InputError("q1, q2, n1 must be positive")
        if self.q1 % self.n1 or self.q2 % self.n1:
            raise InputError(f"n1={self.n1} must divide q1={self.q1} and q2={self.q2}")
        if gcd(self.r1, self.q1) != 1 or gcd(self.r2, self.q2) != 1:
            raise InputError("need gcd(r1, q1) = gcd(r2, q2) = 1")

    @property
    def qhat1(self) -> int:
        return self.q1 // self.n1

    @property
    def qhat2(self) -> int:
        return self.q2 // self.n1


def kloosterman(args: KloostermanArgs | int, b: int | None = None, c: int | None = None) -> complex:
    """S(a, b; c) = sum over units x mod c of e((a x + b x^{-1}) / c).

    Accepts either a ``KloostermanArgs`` or the three integers.
    """
    if not isinstance(args, KloostermanArgs):
        args = KloostermanArgs(args, b, c)
    return kernels.kloosterman(args.a, args.b, args.c)


def character_sum(args: CharSumArgs) -> complex:
    """sum_{beta mod qh1*qh2} S(r1^-1, beta; qh1) S(r2^-1, beta; qh2) e(beta n2 / qh1 qh2).

    Inverses are taken modulo qh1 and qh2 respectively.
    """
    return kernels.character_sum(args.r1, args.r2, args.q1, args.q2, args.n1, args.n2)


def divisor3(n: int) -> int:
    """Number of ordered triples (a, b, c) of positive integers with abc = n."""
    if n < 1:
        raise InputError("d3 needs n >= 1")
    return sum(num_divisors(n // d) for d in divisors(n))


def weil_bound(a: int, b: int, c: int) -> float:
    return num_divisors(c) * c**0.5 * gcd(gcd(a, b), c) ** 0.5
