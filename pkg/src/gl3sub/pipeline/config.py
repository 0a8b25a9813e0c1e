"""Parameters of the S(N) decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, WindowViolation

# desk-scale limits for full-pipeline evaluations
MAX_N = 2000
MAX_Q = 8
MAX_T = 50.0


@dataclass(frozen=True)
class PipelineConfig:
    """Block length N, height t, circle-method parameter Q and truncation controls.

    ``r_max_factor`` scales the dual r-length q t^(1+eps) / N and ``n_max_factor``
    the dual n-length N^2 t^eps / Q^3. The standing window N / t^(1-eps) < Q < N^(1/2)
    is not imposed at construction, since the circle and Poisson identities are
    exact for every Q; :meth:`require_window` enforces it where the analysis needs it.
    """

    N: float
    t: float
    Q: int
    eps: float = 0.05
    r_max_factor: float = 1.0
    n_max_factor: float = 1.0
    tol: float = 1e-10

    def __post_init__(self):
        if not self.N > 0:
            raise InputError("N must be positive")
        if not self.t >= 0:
            raise InputError("t must be nonnegative")
        if int(self.Q) != self.Q or self.Q < 1:
            raise InputError("Q must be a positive integer")
        if not 0 < self.eps < 0.5:
            raise InputError("eps must lie in (0, 1/2)")

    @property
    def window(self) -> tuple[float, float]:
        """(N / t^(1-eps), N^(1/2)); empty when t = 0."""
        lo = self.N / self.t ** (1 - self.eps) if self.t > 0 else np.inf
        return lo, float(np.sqrt(self.N))

    @property
    def window_ok(self) -> bool:
        lo, hi = self.window
        return lo < self.Q < hi

    def require_window(self) -> None:
        lo, hi = self.window
        if not lo < self.Q < hi:
            raise WindowViolation(f"need {lo:.6g} < Q < {hi:.6g}, got Q={self.Q}")

    def require_desk_scale(self) -> None:
        if self.N > MAX_N or self.Q > MAX_Q or self.t > MAX_T:
            raise WindowViolation(f"desk-scale guard: need N <= {MAX_N}, Q <= {MAX_Q}, t <= {MAX_T}")

    def r_max(self, q: int) -> float:
        return self.r_max_factor * q * self.t ** (1 + self.eps) / self.N

    def n_max(self) -> float:
        return self.n_max_factor * self.N**2 * self.t**self.eps / self.Q**3
