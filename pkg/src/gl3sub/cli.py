"""Command-line frontend: ``gl3sub <command> [options]``.

Every command writes one table as JSON (default) or CSV to stdout or
``--output``. Options may also come from a ``key=value`` file given with
``--config``; flags on the command line override it. Errors map to exit codes
2 (input or data), 3 (parameter window) and 4 (compute budget).
"""

from __future__ import annotations

import argparse
import platform
import sys
import time
import warnings
from math import gcd
from pathlib import Path

import numpy as np

from . import kernels
from .errors import Gl3Error, InputError
from .serialize import dumps_csv, dumps_json

__all__ = ["main", "build_parser", "run"]


# ---------------------------------------------------------------- argument types


def int_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive, empty when b < a) or a comma list of integers."""
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _typed(fn):
    def conv(text):
        try:
            return fn(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    conv.__name__ = fn.__name__
    return conv


INTS, FLOATS = _typed(int_range), _typed(float_list)


def read_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# ---------------------------------------------------------------- data sources


def _load_table(args, depth: int):
    from .gl3.coefficients import d3_table, eisenstein_table, load_coefficients
    from .gl3.params import GL3Params

    if args.table:
        return load_coefficients(args.table)
    if args.builtin == "d3":
        return d3_table(int(depth))
    if args.builtin == "eisenstein":
        return eisenstein_table(GL3Params.from_alpha([0, 0.3j, -0.3j]), int(depth))
    raise InputError(f"unknown builtin table {args.builtin!r}")


def _weight(name: str):
    from .smooth import default_u, default_v

    weights = {"u": default_u, "v": default_v}
    if name not in weights:
        raise InputError(f"unknown weight {name!r}; choose from {sorted(weights)}")
    return weights[name]()


def _cx(prefix: str, z) -> dict:
    z = complex(z)
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


# ---------------------------------------------------------------- commands


def cmd_kloosterman(args):
    from .arith import kloosterman, weil_bound

    rows = []
    for c in args.c:
        if c < 1:
            raise InputError(f"modulus must be >= 1, got {c}")
        s = kloosterman(args.a, args.b, c)
        w = weil_bound(args.a, args.b, c)
        rows.append({"c": c, **_cx("S", s), "abs": abs(s), "weil": w, "margin": w - abs(s)})
    return ("c", "S_re", "S_im", "abs", "weil", "margin"), rows, {}


def cmd_delta(args):
    from .circle import CircleConfig, delta_eval

    cfg = CircleConfig(args.Q)
    rows = []
    for n in args.n:
        v = delta_eval(n, cfg)
        target = 1.0 if n == 0 else 0.0
        rows.append({"n": n, "Q": args.Q, "value": v, "residual": abs(v - target)})
    return ("n", "Q", "value", "residual"), rows, {}


def cmd_udagger(args):
    from .oscillatory.mellin import fourier_mellin_exact, fourier_mellin_main

    U = _weight(args.weight)
    x0s = list(args.x0)
    if args.random:
        lo, hi = U.support
        rng = np.random.default_rng(args.seed)
        x0s += [float(v) for v in rng.uniform(lo, hi, args.random)]
    rows, fit = [], []
    for x0 in x0s:
        if x0 == 0:
            raise InputError("x0 must be nonzero")
        for k in args.beta_exp:
            for sign in args.signs:
                beta = sign * 2.0**k
                r = beta / (2 * np.pi * x0)
                s = args.sigma + 1j * beta
                ex = fourier_mellin_exact(U, r, s, tol=args.tol).value
                main = fourier_mellin_main(U, r, s)
                res = abs(ex - main)
                scale = min(abs(beta), abs(r))
                inside = main != 0
                if inside:
                    fit.append((scale, res))
                rows.append({"kind": "point", "x0": x0, "beta": beta, "r": r, **_cx("exact", ex),
                             **_cx("main", main), "residual": res, "scaled": res * scale**1.5,
                             "in_support": bool(inside), "exponent": "", "constant": ""})
    summary = {"kind": "summary", "x0": "", "beta": "", "r": "", "exact_re": "", "exact_im": "",
               "main_re": "", "main_im": "", "residual": "", "scaled": "", "in_support": "",
               "exponent": "", "constant": ""}
    meta = {}
    if len(fit) >= 2:
        sc, rs = np.log([f[0] for f in fit]), np.log([f[1] for f in fit])
        slope = float(np.polyfit(sc, rs, 1)[0])
        const = float(max(f[1] * f[0] ** 1.5 for f in fit))
        summary.update(exponent=slope, constant=const)
        meta = {"fitted_exponent": slope, "constant": const, "fit_points": len(fit)}
    rows.append(summary)
    cols = ("kind", "x0", "beta", "r", "exact_re", "exact_im", "main_re", "main_im", "residual", "scaled",
            "in_support", "exponent", "constant")
    return cols, rows, {"seed": args.seed, "weight": U.name, **meta}


def cmd_huxley_demo(args):
    from .oscillatory import lemmas, phase
    from .oscillatory.quadrature import quad_osc_1d
    from .smooth import bump

    rows = []
    for T in args.T:
        g = bump(-1.0, 1.0)
        f = phase.quadratic(T)
        e = lemmas.huxley_stationary(g, f, (-1.0, 1.0))
        q = quad_osc_1d(g, f, (-1.0, 1.0), tol=args.tol).value
        rows.append({"case": "stationary", "T": T, **_cx("oracle", q), **_cx("main", e.value),
                     "residual": abs(q - e.value), "envelope": e.err_est, "within": abs(q - e.value) <= e.err_est})
        g = bump(0.5, 2.5)
        f = phase.linear(1.1234 * T)
        f.omega_g = 0.25
        e = lemmas.huxley_boundary(g, f, (1.0, 2.0))
        q = quad_osc_1d(g, f, (1.0, 2.0), tol=args.tol).value
        rows.append({"case": "boundary", "T": T, **_cx("oracle", q), **_cx("main", e.value),
                     "residual": abs(q - e.value), "envelope": e.err_est, "within": abs(q - e.value) <= e.err_est})
    cols = ("case", "T", "oracle_re", "oracle_im", "main_re", "main_im", "residual", "envelope", "within")
    return cols, rows, {}


def cmd_gamma3(args):
    from .gl3.gamma import gamma_ell, gamma_pm, stirling_phi_prime
    from .gl3.params import langlands

    p = langlands(complex(args.nu1, args.nu1_im), complex(args.nu2, args.nu2_im))
    rows = []
    for tau in args.tau:
        s = args.sigma + 1j * tau
        g0 = complex(np.atleast_1d(gamma_ell(s, 0, p))[0])
        row = {"tau": tau, "sigma": args.sigma, **_cx("gamma0", g0)}
        for sign, name in ((1, "plus"), (-1, "minus")):
            g = gamma_pm(s, sign, p)
            row[f"abs_{name}"] = abs(g)
            row[f"growth_{name}"] = abs(g) / (1 + abs(tau)) ** (3 * args.sigma + 1.5)
            row[f"tau_dphi_{name}"] = (abs(tau) * abs(complex(stirling_phi_prime(tau, sign, p)))
                                       if abs(tau) >= 3 else "")
        rows.append(row)
    cols = ("tau", "sigma", "gamma0_re", "gamma0_im", "abs_plus", "abs_minus", "growth_plus", "growth_minus",
            "tau_dphi_plus", "tau_dphi_minus")
    return cols, rows, {"alpha": [str(complex(a)) for a in p.alpha]}


def cmd_voronoi(args):
    from .gl3.voronoi import voronoi_check
    from .smooth import log_normal

    h = log_normal(args.center, args.width)
    table = _load_table(args, int(np.ceil(h.support[1])) + 1)
    rows = []
    for q in args.q:
        a = args.a if args.a else next(a for a in range(1, q + 2) if gcd(a, q) == 1)
        r = voronoi_check(table, a, q, h, allow_eisenstein=args.allow_eisenstein)
        rows.append({"q": q, "a": a, **_cx("lhs", r.lhs), **_cx("rhs", r.rhs), **_cx("polar", r.polar),
                     "residual": r.residual, "budget": r.budget, "within": r.residual <= r.budget})
    cols = ("q", "a", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "polar_re", "polar_im", "residual", "budget",
            "within")
    return cols, rows, {"table": table.source, "cuspidal": table.cuspidal}


def cmd_afe(args):
    from .gl3.afe import AFEConfig, afe_value, pole_killing_g
    from .gl3.special import zeta_em

    table = _load_table(args, args.depth)
    rows = []
    for t in args.t:
        s = args.sigma + 1j * t
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            r = afe_value(table, None, AFEConfig(s=s, G=pole_killing_g(args.g_width)))
        row = {"t": t, "sigma": args.sigma, **_cx("value", r.value), "err_est": r.err_est,
               "warnings": [str(w.message) for w in caught], "zeta3_re": "", "zeta3_im": "", "residual": ""}
        if table.source.startswith("d3("):
            z = complex(zeta_em(s)) ** 3
            row.update(**_cx("zeta3", z), residual=abs(r.value - z))
        rows.append(row)
    cols = ("t", "sigma", "value_re", "value_im", "err_est", "zeta3_re", "zeta3_im", "residual", "warnings")
    return cols, rows, {"table": table.source}


def cmd_pipeline(args):
    from .pipeline.circle_split import s_pm_circle
    from .pipeline.config import PipelineConfig
    from .pipeline.direct import n_range, s_direct
    from .smooth import default_u, default_v

    cfg = PipelineConfig(N=args.N, t=args.t, Q=args.Q)
    cfg.require_desk_scale()
    if args.require_window:
        cfg.require_window()
    U, V = default_u(), default_v()
    table = _load_table(args, int(np.floor(V.support[1] * cfg.N)) + 1)
    start = time.perf_counter()
    direct = s_direct(table, cfg, V)
    split = s_pm_circle(table, cfg, U, V)
    residual = abs(split.total - direct)
    rows = [{"N": cfg.N, "t": cfg.t, "Q": cfg.Q, **_cx("direct", direct), **_cx("s_plus", split.s_plus),
             **_cx("s_minus", split.s_minus), "residual": residual, "err_est": split.err_est,
             "tol": args.tol * abs(direct), "within": residual <= args.tol * abs(direct)}]
    meta = {"x_nodes": split.nodes, "n_terms": int(n_range(cfg, V).size), "window": list(cfg.window),
            "window_ok": cfg.window_ok, "table": table.source}
    if args.dyadic:
        from .pipeline.assemble import snc_assemble

        for C in args.dyadic:
            snc = snc_assemble(table, cfg, C, workers=args.workers)
            rows.append({"N": cfg.N, "t": cfg.t, "Q": cfg.Q, "C": C, **_cx("direct", snc.direct),
                         **_cx("s1", sum(snc.s1.values())), **_cx("s2", snc.s2_total),
                         "residual": abs(snc.total - snc.direct), "err_est": snc.err_est})
        meta["dyadic"] = list(args.dyadic)
    if args.timing:
        meta["wall_seconds"] = time.perf_counter() - start
    cols = ("N", "t", "Q", "direct_re", "direct_im", "s_plus_re", "s_plus_im", "s_minus_re", "s_minus_im",
            "residual", "err_est", "tol", "within")
    if args.dyadic:
        cols = ("N", "t", "Q", "C", "direct_re", "direct_im", "s_plus_re", "s_plus_im", "s_minus_re",
                "s_minus_im", "s1_re", "s1_im", "s2_re", "s2_im", "residual", "err_est", "tol", "within")
        rows = [{c: row.get(c, "") for c in cols} for row in rows]
    return cols, rows, meta


def cmd_scan(args):
    from .pipeline.scan import COLUMNS, bound_scan

    if not args.N:
        raise InputError("empty N grid")
    table = _load_table(args, 2 * int(max(args.N)) + 1)
    rep = bound_scan(table, args.t, args.N, workers=args.workers, seed=args.seed)
    return COLUMNS, rep.rows, rep.metadata


# ---------------------------------------------------------------- parser


def _common(p, table=False):
    p.add_argument("--config", help="key=value file; flags override its entries")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled grids")
    p.add_argument("--workers", type=int, default=1, help="worker processes for parallel sweeps")
    if table:
        p.add_argument("--table", help="coefficient file")
        p.add_argument("--builtin", choices=("d3", "eisenstein"), default="d3",
                       help="generated table used when --table is absent")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gl3sub", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kloosterman", help="S(a, b; c) over a modulus range with Weil margins")
    _common(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--c", type=INTS, default="1..10", help="moduli, 'lo..hi' or a comma list")
    p.set_defaults(fn=cmd_kloosterman)

    p = sub.add_parser("delta", help="circle-method detector of n = 0")
    _common(p)
    p.add_argument("--n", type=INTS, default="-5..5")
    p.add_argument("--Q", type=int, default=3)
    p.set_defaults(fn=cmd_delta)

    p = sub.add_parser("udagger", help="Fourier-Mellin transform against its stationary-phase main term")
    _common(p)
    p.add_argument("--weight", default="u", help="u (plateau on [1/2, 5/2]) or v (bump on [1, 2])")
    p.add_argument("--x0", type=FLOATS, default="0.6,3.0", help="stationary points beta / 2 pi r")
    p.add_argument("--random", type=int, default=0, help="extra stationary points drawn from supp U")
    p.add_argument("--beta-exp", type=INTS, default="9..13", help="log2 |beta|")
    p.add_argument("--signs", type=INTS, default="1,-1")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(fn=cmd_udagger)

    p = sub.add_parser("huxley-demo", help="stationary and boundary expansions against quadrature")
    _common(p)
    p.add_argument("--T", type=FLOATS, default="100,1000,10000")
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(fn=cmd_huxley_demo)

    p = sub.add_parser("gamma3", help="GL(3) gamma factors on a vertical line")
    _common(p)
    p.add_argument("--nu1", type=float, default=1 / 3)
    p.add_argument("--nu2", type=float, default=1 / 3)
    p.add_argument("--nu1-im", type=float, default=0.0)
    p.add_argument("--nu2-im", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=-0.5)
    p.add_argument("--tau", type=FLOATS, default="-100,-10,0,10,100")
    p.set_defaults(fn=cmd_gamma3)

    p = sub.add_parser("voronoi", help="twisted Voronoi identity on a coefficient table")
    _common(p, table=True)
    p.add_argument("--q", type=INTS, default="1,2,3")
    p.add_argument("--a", type=int, default=0, help="twist numerator; 0 picks the least unit mod q")
    p.add_argument("--center", type=float, default=20.0, help="log-normal weight centre")
    p.add_argument("--width", type=float, default=0.4, help="log-normal weight width")
    p.add_argument("--allow-eisenstein", action="store_true", help="add polar terms instead of refusing")
    p.set_defaults(fn=cmd_voronoi)

    p = sub.add_parser("afe", help="approximate functional equation on the critical line")
    _common(p, table=True)
    p.add_argument("--t", type=FLOATS, default="5,10,20")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--g-width", type=float, default=4.0)
    p.add_argument("--depth", type=int, default=6000, help="size of a generated table")
    p.set_defaults(fn=cmd_afe)

    p = sub.add_parser("pipeline", help="S(N) directly and through the circle-method split")
    _common(p, table=True)
    p.add_argument("--N", type=float, default=200.0)
    p.add_argument("--t", type=float, default=15.0)
    p.add_argument("--Q", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-6, help="relative tolerance of the identity column")
    p.add_argument("--dyadic", type=INTS, default="", help="also assemble S(N, C) for these C")
    p.add_argument("--require-window", action="store_true", help="enforce N/t^(1-eps) < Q < N^(1/2)")
    p.add_argument("--timing", action="store_true", help="record wall time (output is then not reproducible)")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("scan", help="|S(N)| against N^(3/4) t^(3/10) over an N grid")
    _common(p, table=True)
    p.add_argument("--t", type=float, default=20.0)
    p.add_argument("--N", type=FLOATS, default="100,200,400,800")
    p.set_defaults(fn=cmd_scan)
    return ap


def _parse(argv):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        conf = read_config(args.config)
        sub = ap._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(conf) - known)
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**{k: v for k, v in conf.items() if k != "config"})
        args = ap.parse_args(argv)
    return args


def _envelope(args, meta):
    keep = {k: v for k, v in vars(args).items() if k not in ("fn", "output", "config", "format", "workers")}
    runtime = {"backend": kernels.BACKEND, "numpy": np.__version__, "python": platform.python_version()}
    return {"command": args.command, "parameters": keep, "metadata": meta, "runtime": runtime}


def run(argv=None) -> tuple[str, argparse.Namespace]:
    """Execute one command; return the serialized text and the parsed options (raises on error)."""
    args = _parse(argv)
    if args.workers < 1:
        raise InputError("workers must be >= 1")
    cols, rows, meta = args.fn(args)
    if args.format == "csv":
        return dumps_csv(cols, rows), args
    return dumps_json({**_envelope(args, meta), "columns": list(cols), "rows": rows}), args


def main(argv=None) -> int:
    try:
        text, args = run(argv)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except Gl3Error as exc:
        print(f"gl3sub: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"gl3sub: error: {exc}", file=sys.stderr)
        return InputError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
