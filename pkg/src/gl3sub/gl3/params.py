"""Spectral parameters of a GL(3) form and their Langlands triple."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GL3Params:
    """Spectral type (nu1, nu2); the Langlands triple alpha is derived from it.

    alpha1 = -nu1 - 2 nu2 + 1, alpha2 = -nu1 + nu2, alpha3 = 2 nu1 + nu2 - 1.
    """

    nu1: complex
    nu2: complex

    @property
    def alpha(self) -> np.ndarray:
        n1, n2 = complex(self.nu1), complex(self.nu2)
        return np.array([-n1 - 2 * n2 + 1, -n1 + n2, 2 * n1 + n2 - 1])

    def dual(self) -> "GL3Params":
        """Parameters of the contragredient, whose triple is (-alpha3, -alpha2, -alpha1)."""
        return GL3Params(self.nu2, self.nu1)

    @classmethod
    def from_alpha(cls, alpha) -> "GL3Params":
        """Inverse of ``alpha``; the triple must sum to zero."""
        a1, a2, a3 = (complex(a) for a in alpha)
        if abs(a1 + a2 + a3) > 1e-12 * max(1.0, abs(a1) + abs(a2) + abs(a3)):
            from ..errors import InputError

            raise InputError("Langlands parameters must sum to zero")
        nu2 = (1 - a1 + a2) / 3
        return cls(_real_if_close(nu2 - a2), _real_if_close(nu2))

    @property
    def is_real(self) -> bool:
        """True when every alpha is real, so the gamma factors satisfy Schwarz reflection."""
        return bool(np.all(np.abs(self.alpha.imag) < 1e-15))


def _real_if_close(z: complex):
    return z.real if abs(z.imag) < 1e-15 else z


def langlands(nu1, nu2) -> GL3Params:
    return GL3Params(_real_if_close(complex(nu1)), _real_if_close(complex(nu2)))


TRIVIAL = GL3Params(1 / 3, 1 / 3)
