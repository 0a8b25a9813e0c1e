"""Hecke eigenvalue tables: file ingestion, writing, and generated Eisenstein tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

import numpy as np

from .. import kernels
from ..arith import divisors, mobius
from ..errors import FormatError, InsufficientData, NormalizationError
from .params import GL3Params, langlands


@dataclass
class CoefficientTable:
    """lambda(n1, n2) keyed by (n1, n2), with lambda(1, 1) = 1.

    Missing entries are derived from the rows lambda(n, 1) and lambda(1, n) by
    the Hecke relation lambda(n1, n2) = sum_{d | (n1, n2)} mu(d) lambda(n1/d, 1) lambda(1, n2/d).
    """

    params: GL3Params
    entries: dict = field(default_factory=dict)
    selfdual: bool = False
    cuspidal: bool = True
    source: str = ""

    def __post_init__(self):
        one = self.entries.get((1, 1))
        if one is None or abs(one - 1) > 1e-12:
            raise NormalizationError(f"lambda(1,1) = {one}, expected 1")
        self._row = self._contiguous(lambda n: (1, n))
        self._col = self._contiguous(lambda n: (n, 1))

    def _contiguous(self, key):
        vals = [np.nan + 0j]
        n = 1
        while key(n) in self.entries:
            vals.append(complex(self.entries[key(n)]))
            n += 1
        return np.array(vals, dtype=complex)

    @property
    def depth(self) -> int:
        """Largest M with every lambda(1, n), n <= M, present."""
        return self._row.size - 1

    @property
    def dual_depth(self) -> int:
        """Largest M with every lambda(n, 1), n <= M, present."""
        return self._col.size - 1

    @property
    def max_norm(self) -> int:
        return max(n1 * n1 * n2 for n1, n2 in self.entries)

    def row(self, n_max: int) -> np.ndarray:
        """lambda(1, n) for n = 0..n_max (index 0 is NaN)."""
        if n_max > self.depth:
            raise InsufficientData(f"need lambda(1,n) to n={n_max}, table has {self.depth}")
        return self._row[: n_max + 1]

    def col(self, n_max: int) -> np.ndarray:
        """lambda(n, 1) for n = 0..n_max (index 0 is NaN)."""
        if n_max > self.dual_depth:
            raise InsufficientData(f"need lambda(n,1) to n={n_max}, table has {self.dual_depth}")
        return self._col[: n_max + 1]

    def __call__(self, n1: int, n2: int) -> complex:
        v = self.entries.get((n1, n2))
        if v is not None:
            return complex(v)
        if n1 > self.dual_depth or n2 > self.depth:
            raise InsufficientData(f"lambda({n1},{n2}) not derivable from the table")
        g = gcd(n1, n2)
        return complex(sum(mobius(d) * self._col[n1 // d] * self._row[n2 // d] for d in divisors(g)))

    def hecke_block(self, n1: int, n2_max: int) -> np.ndarray:
        """lambda(n2, n1) for n2 = 0..n2_max as an array (index 0 is 0)."""
        out = np.zeros(n2_max + 1, dtype=complex)
        for n2 in range(1, n2_max + 1):
            out[n2] = self(n2, n1)
        return out

    def check_selfdual(self, samples: int = 50) -> float:
        """Largest |lambda(n1,n2) - conj lambda(n2,n1)| over stored pairs (spot check)."""
        worst = 0.0
        keys = sorted(k for k in self.entries if (k[1], k[0]) in self.entries)[:samples]
        for n1, n2 in keys:
            worst = max(worst, abs(self.entries[(n1, n2)] - np.conj(self.entries[(n2, n1)])))
        return worst


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_coefficients(table: CoefficientTable, path) -> None:
    """Write ``table`` in the line format, floats with 17 significant digits."""
    lines = []
    for name, v in (("nu1", table.params.nu1), ("nu2", table.params.nu2)):
        v = complex(v)
        lines.append(f"#{name} {_fmt(v.real)}" + (f" {_fmt(v.imag)}" if v.imag else ""))
    lines.append(f"#selfdual {int(table.selfdual)}")
    lines.append(f"#cuspidal {int(table.cuspidal)}")
    for (n1, n2) in sorted(table.entries):
        v = complex(table.entries[(n1, n2)])
        lines.append(f"{n1} {n2} {_fmt(v.real)} {_fmt(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_coefficients(path) -> CoefficientTable:
    """Parse a coefficient file.

    Headers: ``#nu1 <re> [im]``, ``#nu2 <re> [im]``, ``#selfdual <0|1>`` and the
    optional ``#cuspidal <0|1>`` (default 1). Data lines: ``n1 n2 re im``.
    Raises FormatError on malformed lines, duplicates or a missing header, and
    NormalizationError unless lambda(1, 1) = 1.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    head: dict = {}
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if line.startswith("#"):
                key = parts[0][1:]
                if key in ("nu1", "nu2"):
                    head[key] = complex(float(parts[1]), float(parts[2]) if len(parts) > 2 else 0.0)
                elif key in ("selfdual", "cuspidal"):
                    if parts[1] not in ("0", "1"):
                        raise ValueError(parts[1])
                    head[key] = parts[1] == "1"
                continue
            if len(parts) != 4:
                raise ValueError("expected n1 n2 re im")
            n1, n2 = int(parts[0]), int(parts[1])
            if n1 < 1 or n2 < 1:
                raise ValueError("indices must be positive")
            val = complex(float(parts[2]), float(parts[3]))
        except (ValueError, IndexError) as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
        if (n1, n2) in entries:
            raise FormatError(f"{path}:{lineno}: duplicate entry ({n1},{n2})")
        entries[(n1, n2)] = val
    for key in ("nu1", "nu2", "selfdual"):
        if key not in head:
            raise FormatError(f"{path}: missing #{key} header")
    table = CoefficientTable(
        params=langlands(head["nu1"], head["nu2"]),
        entries=entries,
        selfdual=head["selfdual"],
        cuspidal=head.get("cuspidal", True),
        source=str(path),
    )
    if table.selfdual and table.check_selfdual() > 1e-8:
        raise FormatError(f"{path}: self-dual flag set but lambda(n1,n2) != conj lambda(n2,n1)")
    return table


def _triple_convolution(n_max: int, alpha) -> np.ndarray:
    """sum_{abc = n} a^alpha1 b^alpha2 c^alpha3 for n = 0..n_max by Dirichlet convolution."""
    n = np.arange(n_max + 1, dtype=float)
    n[0] = 1.0
    out = None
    for a in alpha:
        f = np.exp(complex(a) * np.log(n))
        f[0] = 0
        if out is None:
            out = f
            continue
        conv = np.zeros(n_max + 1, dtype=complex)
        for d in range(1, n_max + 1):
            conv[d::d] += f[d] * out[1 : n_max // d + 1]
        out = conv
    return out


def eisenstein_table(p: GL3Params, n_max: int, full_norm: int = 0) -> CoefficientTable:
    """Minimal-parabolic Eisenstein coefficients.

    lambda(1, n) = sum_{abc=n} a^alpha1 b^alpha2 c^alpha3 and lambda(n, 1) the same with
    -alpha; pairs with n1^2 n2 <= ``full_norm`` are stored explicitly via the Hecke relation.
    The table is flagged non-cuspidal.
    """
    row = _triple_convolution(n_max, p.alpha)
    col = _triple_convolution(n_max, -p.alpha)
    entries = {(1, n): complex(row[n]) for n in range(1, n_max + 1)}
    entries.update({(n, 1): complex(col[n]) for n in range(1, n_max + 1)})
    entries[(1, 1)] = 1.0 + 0j
    # lambda(n, 1) = conj lambda(1, n) exactly when -alpha is a permutation of conj(alpha)
    a = p.alpha
    selfdual = bool(np.allclose(np.sort_complex(-a), np.sort_complex(np.conj(a)), atol=1e-14))
    table = CoefficientTable(params=p, entries=entries, selfdual=selfdual,
                             cuspidal=False, source=f"eisenstein(alpha={np.round(p.alpha, 12).tolist()})")
    for n1 in range(2, int(np.sqrt(max(full_norm, 0))) + 1):
        for n2 in range(2, full_norm // (n1 * n1) + 1):
            if gcd(n1, n2) > 1:
                table.entries[(n1, n2)] = table(n1, n2)
    return table


def d3_table(n_max: int) -> CoefficientTable:
    """lambda(1, n) = lambda(n, 1) = d3(n), the Eisenstein series at alpha = (0, 0, 0)."""
    d3 = np.asarray(kernels.divisor3_table(n_max), dtype=float)
    entries = {(1, n): complex(d3[n]) for n in range(1, n_max + 1)}
    entries.update({(n, 1): complex(d3[n]) for n in range(1, n_max + 1)})
    return CoefficientTable(params=langlands(1 / 3, 1 / 3), entries=entries, selfdual=True,
                            cuspidal=False, source=f"d3(n<={n_max})")


def ramanujan_avg(table: CoefficientTable, x: float) -> float:
    """sum_{n1^2 n2 <= x} |lambda(n2, n1)|^2 / x."""
    x = float(x)
    if x < 1:
        raise InsufficientData("x must be at least 1")
    n1_max = int(np.sqrt(x))
    total = 0.0
    for n1 in range(1, n1_max + 1):
        n2_max = int(x // (n1 * n1))
        if n1 == 1:
            vals = table.col(n2_max)[1:]
        else:
            vals = table.hecke_block(n1, n2_max)[1:]
        total += float(np.sum(np.abs(vals) ** 2))
    return total / x
