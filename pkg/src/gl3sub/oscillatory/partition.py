"""Smooth partition of unity: one weight near 0 plus (4/3)-adic pieces on both sides."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from ..smooth import Jet, SmoothWeight, step_jet

RHO = np.sqrt(4.0 / 3.0)


@dataclass(frozen=True)
class PartitionPiece:
    """A weight W_J supported in [J, 4J/3] (mirrored for J < 0); J = 0 is the central piece."""

    J: float
    weight: SmoothWeight


def _abs_jet(x: Jet) -> Jet:
    sgn = np.where(x.c[0] < 0, -1.0, 1.0)
    return x * sgn


def _log_step(x: Jet, j: float) -> Jet:
    """T_j(|x|): 0 for |x| <= j, 1 for |x| >= RHO j, smooth in log|x|."""
    y = _abs_jet(x)
    pos = y.c[0] > 0
    safe = Jet(np.where(pos, y.c, np.eye(y.order + 1, 1).reshape((-1,) + (1,) * (y.c.ndim - 1))))
    return step_jet(safe.log(), np.log(j), np.log(RHO * j)).masked(pos, 0.0)


def build_partition(range_bound: float) -> list[PartitionPiece]:
    """Weights W_0 and W_{+-J} summing to 1 on [-range_bound, range_bound].

    With J_k = RHO^(k-2) and T_k the log-step from J_k to RHO J_k, the
    pieces are W_0 = 1 - T_1 (supported in [-1, 1]) and W_k = T_k - T_{k+1}
    (supported in [J_k, 4 J_k / 3]) plus mirror images. The sum telescopes
    to 1 - T_{K+1}, which is 1 wherever |x| <= J_{K+1}.
    """
    if not range_bound > 0:
        raise InputError("range_bound must be positive")
    js = [RHO ** -1]
    while js[-1] < range_bound:
        js.append(js[-1] * RHO)
    # js[-1] = J_{K+1} >= range_bound
    pieces = [
        PartitionPiece(
            0.0,
            SmoothWeight((-RHO * js[0], RHO * js[0]), lambda x, j=js[0]: 1.0 - _log_step(x, j),
                         name="W0"),
        )
    ]
    for jk, jn in zip(js[:-1], js[1:]):
        for sgn in (1.0, -1.0):

            def build(x, jk=jk, jn=jn, sgn=sgn):
                side = (x.c[0] * sgn) > 0
                return (_log_step(x, jk) - _log_step(x, jn)).masked(side, 0.0)

            lo, hi = sorted((sgn * jk, sgn * jk * RHO * RHO))
            pieces.append(PartitionPiece(sgn * jk, SmoothWeight((lo, hi), build, "dyadic",
                                                                 name=f"W[{sgn * jk:.6g}]")))
    return pieces


def partition_sum(pieces, x):
    return sum(p.weight(x) for p in pieces)
