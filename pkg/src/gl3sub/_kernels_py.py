"""Pure-Python/numpy fallback for the compiled kernels in ``_kernels.pyx``."""

from math import gcd

import numpy as np


def _inv(a, m):
    if m == 1:
        return 0
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % m


def _units(c):
    xs = [x for x in range(1, c + 1) if gcd(x, c) == 1]
    inv = [_inv(x, c) for x in xs]
    return np.array(xs, dtype=np.int64), np.array(inv, dtype=np.int64)


def kloosterman(a, b, c):
    if c < 1:
        raise ValueError("modulus must be >= 1")
    x, xb = _units(c)
    k = (a % c * x + b % c * xb) % c
    return complex(np.exp(2j * np.pi * k / c).sum())


def kloosterman_vector(a, c):
    x, xb = _units(c)
    beta = np.arange(c, dtype=np.int64)
    k = ((a % c) * x[None, :] + beta[:, None] * xb[None, :]) % c
    return np.exp(2j * np.pi * k / c).sum(axis=1)


def character_sum(r1, r2, q1, q2, n1, n2):
    h1, h2 = q1 // n1, q2 // n1
    m = h1 * h2
    k1 = kloosterman_vector(_inv(r1, h1), h1)
    k2 = kloosterman_vector(_inv(r2, h2), h2)
    beta = np.arange(m, dtype=np.int64)
    tw = np.exp(2j * np.pi * ((beta * n2) % m) / m)
    return complex(np.sum(k1[beta % h1] * k2[beta % h2] * tw))


def divisor3_table(n_max):
    d2 = np.zeros(n_max + 1, dtype=np.int64)
    for i in range(1, n_max + 1):
        d2[i::i] += 1
    d3 = np.zeros(n_max + 1, dtype=np.int64)
    for i in range(1, n_max + 1):
        d3[i::i] += d2[1 : n_max // i + 1]
    return d3
