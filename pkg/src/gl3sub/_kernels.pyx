# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels (Kloosterman / character sums, d3 sieve).

Signatures mirror ``gl3sub._kernels_py`` exactly; ``gl3sub.kernels`` picks
one of the two at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline long _mod(long a, long m) noexcept nogil:
    cdef long r = a % m
    if r < 0:
        r += m
    return r


cdef inline long _gcd(long a, long b) noexcept nogil:
    cdef long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline long _inv(long a, long m) noexcept nogil:
    # extended Euclid; caller guarantees gcd(a, m) == 1
    cdef long r0 = m, r1 = _mod(a, m), s0 = 0, s1 = 1, q, tmp
    if m == 1:
        return 0
    while r1:
        q = r0 // r1
        tmp = r0 - q * r1
        r0 = r1
        r1 = tmp
        tmp = s0 - q * s1
        s0 = s1
        s1 = tmp
    return _mod(s0, m)


cdef long _units(long c, long* xs, long* xb) noexcept nogil:
    # units x mod c with their inverses; returns the count
    cdef long x, n = 0
    for x in range(1, c + 1):
        if _gcd(x, c) == 1:
            xs[n] = x % c
            xb[n] = _inv(x, c)
            n += 1
    return n


cdef void _roots(long c, double* cr, double* ci) noexcept nogil:
    # e(k/c) for k = 0..c-1
    cdef long k
    cdef double w = 2.0 * M_PI / c
    for k in range(c):
        cr[k] = cos(w * k)
        ci[k] = sin(w * k)


cdef void _kloo_vec(long a, long c, double* out_r, double* out_i) noexcept nogil:
    # S(a, beta; c) for beta = 0..c-1 from tables of units and roots of unity
    cdef long* xs = <long*> malloc(c * sizeof(long))
    cdef long* xb = <long*> malloc(c * sizeof(long))
    cdef double* cr = <double*> malloc(c * sizeof(double))
    cdef double* ci = <double*> malloc(c * sizeof(double))
    cdef long n, i, beta, k
    cdef double sr, si
    n = _units(c, xs, xb)
    _roots(c, cr, ci)
    a = _mod(a, c)
    for beta in range(c):
        sr = 0.0
        si = 0.0
        for i in range(n):
            k = (a * xs[i] + beta * xb[i]) % c
            sr += cr[k]
            si += ci[k]
        out_r[beta] = sr
        out_i[beta] = si
    free(xs)
    free(xb)
    free(cr)
    free(ci)


cdef void _kloo(long a, long b, long c, double* re, double* im) noexcept nogil:
    cdef long x, k
    cdef double sr = 0.0, si = 0.0
    cdef double w = 2.0 * M_PI / c
    a = _mod(a, c)
    b = _mod(b, c)
    for x in range(1, c + 1):
        if _gcd(x, c) != 1:
            continue
        k = (a * x + b * _inv(x, c)) % c
        sr += cos(w * k)
        si += sin(w * k)
    re[0] = sr
    im[0] = si


def kloosterman(long a, long b, long c):
    cdef double re, im
    if c < 1:
        raise ValueError("modulus must be >= 1")
    _kloo(a, b, c, &re, &im)
    return complex(re, im)


def kloosterman_vector(long a, long c):
    """S(a, beta; c) for beta = 0..c-1."""
    if c < 1:
        raise ValueError("modulus must be >= 1")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] re = np.empty(c)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] im = np.empty(c)
    _kloo_vec(a, c, &re[0], &im[0])
    return re + 1j * im


def character_sum(long r1, long r2, long q1, long q2, long n1, long n2):
    """Sum over beta mod qh1 qh2 of two Kloosterman vectors and a twist, O(q^2) work."""
    cdef long h1 = q1 // n1, h2 = q2 // n1
    cdef long m = h1 * h2
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a_r = np.empty(h1), a_i = np.empty(h1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_r = np.empty(h2), b_i = np.empty(h2)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e_r = np.empty(m), e_i = np.empty(m)
    cdef long beta, k, i1, i2
    cdef double pr, pi_, sr = 0.0, si = 0.0
    _kloo_vec(_inv(r1, h1), h1, &a_r[0], &a_i[0])
    _kloo_vec(_inv(r2, h2), h2, &b_r[0], &b_i[0])
    _roots(m, &e_r[0], &e_i[0])
    for beta in range(m):
        i1 = beta % h1
        i2 = beta % h2
        k = _mod(beta * n2, m)
        pr = a_r[i1] * b_r[i2] - a_i[i1] * b_i[i2]
        pi_ = a_r[i1] * b_i[i2] + a_i[i1] * b_r[i2]
        sr += pr * e_r[k] - pi_ * e_i[k]
        si += pr * e_i[k] + pi_ * e_r[k]
    return complex(sr, si)


def divisor3_table(long n_max):
    """d3(n) for n = 0..n_max (entry 0 is 0)."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] d2 = np.zeros(n_max + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] d3 = np.zeros(n_max + 1, dtype=np.int64)
    cdef long i, j
    for i in range(1, n_max + 1):
        for j in range(i, n_max + 1, i):
            d2[j] += 1
    for i in range(1, n_max + 1):
        for j in range(i, n_max + 1, i):
            d3[j] += d2[j // i]
    return d3
