"""Direct evaluation of S(N) = sum lambda(1,n) n^(-it) V(n/N)."""

from __future__ import annotations

import numpy as np

from ..errors import InsufficientData
from ..gl3.coefficients import CoefficientTable
from .config import PipelineConfig


def n_range(cfg: PipelineConfig, V) -> np.ndarray:
    lo, hi = V.support
    return np.arange(max(1, int(np.ceil(lo * cfg.N))), int(np.floor(hi * cfg.N)) + 1)


def s_direct(table: CoefficientTable, cfg: PipelineConfig, V) -> complex:
    """sum over n in N supp V of lambda(1,n) n^(-it) V(n/N)."""
    n = n_range(cfg, V)
    if n.size and n[-1] > table.depth:
        raise InsufficientData(f"need lambda(1,n) to n={n[-1]}, table has {table.depth}")
    lam = table.row(int(n[-1]))[n] if n.size else np.zeros(0)
    nf = n.astype(float)
    return complex(np.sum(lam * np.exp(-1j * cfg.t * np.log(nf)) * V(nf / cfg.N)))
