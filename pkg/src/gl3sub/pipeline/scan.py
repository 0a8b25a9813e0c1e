"""Empirical scan of |S(N)| against N^(3/4) t^(3/10) with the balancing choice of Q."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from ..gl3.coefficients import CoefficientTable
from ..parallel import keyed_map
from ..serialize import dumps_csv, dumps_json
from ..smooth import default_v
from .config import MAX_Q, PipelineConfig
from .direct import n_range, s_direct

COLUMNS = ("N", "t", "Q", "abs_S", "envelope", "ratio", "terms", "flags")


def balanced_q(N: float, t: float, eps: float = 0.05) -> tuple[int, list[str]]:
    """round(N^(1/2) / t^(1/5)) moved into the integer window N / t^(1-eps) < Q < N^(1/2), with flags."""
    flags = []
    q = max(1, int(round(np.sqrt(N) / t**0.2)))
    lo, hi = N / t ** (1 - eps), np.sqrt(N)
    q_lo, q_hi = int(np.floor(lo)) + 1, int(np.ceil(hi)) - 1
    if q_lo > q_hi:
        flags.append("window empty")
    elif q < q_lo:
        q, flags = q_lo, flags + ["clamped"]
    elif q > q_hi:
        q, flags = q_hi, flags + ["clamped"]
    if q > MAX_Q:
        q, flags = MAX_Q, flags + ["clamped desk-scale"]
    return q, flags


@dataclass
class ScanReport:
    """Rows of (N, t, Q, |S(N)|, N^(3/4) t^(3/10), ratio, terms, flags) and run metadata."""

    rows: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        return dumps_csv(COLUMNS, self.rows)

    def to_json(self) -> str:
        return dumps_json({"rows": self.rows, "metadata": self.metadata})


def _scan_row(args):
    table, N, t = args
    Q, flags = balanced_q(N, t)
    cfg = PipelineConfig(N=N, t=t, Q=Q)
    cfg.require_desk_scale()
    V = default_v()
    value = abs(s_direct(table, cfg, V))
    env = N**0.75 * t**0.3
    return {"N": N, "t": t, "Q": Q, "abs_S": value, "envelope": env, "ratio": value / env,
            "terms": int(n_range(cfg, V).size), "flags": flags}


def bound_scan(table: CoefficientTable, t: float, N_grid, workers: int = 1, seed: int = 0) -> ScanReport:
    """One row per N: the balanced Q (flagged when clamped or when the window is
    empty), |S(N)| by direct summation and its ratio to N^(3/4) t^(3/10).

    Ratios are reported only; nothing asymptotic is asserted. ``terms`` counts
    the summed coefficients, the deterministic measure of work per row.
    """
    N_grid = [float(n) for n in N_grid]
    if not N_grid:
        raise InputError("empty N grid")
    if len(set(N_grid)) != len(N_grid):
        raise InputError("duplicate N in grid")
    rows = keyed_map(_scan_row, [(N, (table, N, float(t))) for N in N_grid], workers)
    out = [rows[N] for N in sorted(rows)]
    V = default_v()
    meta = {"seed": int(seed), "weight": V.name, "weight_support": list(V.support),
            "truncation": "exact: every n in N supp V", "table_depth": table.depth}
    return ScanReport(out, meta)
