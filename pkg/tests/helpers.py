"""Shared samplers for the test suite."""

from math import gcd

import numpy as np

from gl3sub.oscillatory.sp import SpParams


def sample_sp(rng, n, ts=(1e4, 2e4), x0_range=(0.1, 0.9), Q=30, C=16):
    """SpParams with r = -1, N = 2t and tau chosen so the x-stationary point is uniform in ``x0_range``."""
    out = []
    for _ in range(n):
        t = float(rng.choice(ts))
        q = int(rng.choice([q for q in range(C, 2 * C) if q <= 30]))
        a = int(rng.choice([a for a in range(Q + 1, q + Q + 1) if gcd(a, q) == 1]))
        x0 = rng.uniform(*x0_range)
        tau = -x0 * t / (a + x0)
        out.append(SpParams(q=q, a=a, r=-1, t=t, tau=tau, N=2 * t, C=C, Q=Q))
    return out
