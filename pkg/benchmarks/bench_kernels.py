"""Time the compiled kernels against the numpy fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--repeat 5]``. Prints one line
per kernel with the best wall time of each backend, their ratio and the
largest difference between the two results.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from gl3sub.kernels import backends

CASES = {
    "kloosterman c<=300": lambda k: [k.kloosterman(3, 7, c) for c in range(1, 301)],
    "kloosterman_vector c=997": lambda k: k.kloosterman_vector(5, 997),
    "character_sum q<=24": lambda k: [k.character_sum(1, 1, q1, q2, 1, 3)
                                      for q1 in range(1, 25, 5) for q2 in range(1, 25, 7)],
    "divisor3_table 2e5": lambda k: k.divisor3_table(200_000),
}


def _diff(a, b) -> float:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    impls = backends()
    if "cython" not in impls:
        print("compiled extension not importable; build with `pip install -e . --no-build-isolation`")
    print(f"{'kernel':28s} " + " ".join(f"{name:>12s}" for name in impls) + f" {'speedup':>9s} {'max diff':>10s}")
    for label, fn in CASES.items():
        times, values = {}, {}
        for name, mod in impls.items():
            values[name] = fn(mod)
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        diff = _diff(values["python"], values["cython"]) if "cython" in values else float("nan")
        print(f"{label:28s} " + " ".join(f"{times[n]:12.6f}" for n in impls) + f" {speed:9.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
