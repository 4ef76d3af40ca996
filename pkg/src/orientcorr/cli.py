"""Command line entry point: ``orientcorr <command> [options]``.

Exit codes: 0 success, 1 usage or range error, 2 a scan found a
non-positive covariance at some ``p > 0``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import bounds, gnm, oracle, recursion
from .montecarlo import mc_gnp

DEFAULT_MAX_N = 24


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- value parsing ---------------------------------------------------------------


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def parse_grid(text: str) -> list[Fraction]:
    """``start:stop:step`` with exact rationals; ``stop`` included when hit."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like start:stop:step")
    start, stop, step = (parse_rational(s) for s in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    if stop < start:
        raise argparse.ArgumentTypeError("grid stop must not precede start")
    out = []
    k = 0
    while start + k * step <= stop:
        out.append(start + k * step)
        k += 1
    return out


def parse_range(text: str) -> list[int]:
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("range must look like A:B")
    if hi < lo:
        raise argparse.ArgumentTypeError("range end precedes start")
    return list(range(lo, hi + 1))


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")


def fstr(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def ffloat(x) -> str:
    return repr(float(x))


# -- output ------------------------------------------------------------------------


def _emit(args, header: Sequence[str], rows: Iterable[Sequence], payload=None) -> None:
    """Write ``rows`` as CSV, or ``payload`` (default: row dicts) as JSON."""
    rows = list(rows)
    if args.format == "json":
        if payload is None:
            payload = [dict(zip(header, r)) for r in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _n_values(args, minimum: int = 4) -> list[int]:
    ns: list[int] = []
    if getattr(args, "n", None):
        ns.extend(args.n)
    if getattr(args, "n_range", None):
        ns.extend(args.n_range)
    if not ns:
        raise UsageError("give --n or --n-range")
    ns = sorted(set(ns))
    if ns[0] < minimum:
        raise UsageError(f"n must be >= {minimum}")
    ceiling = getattr(args, "max_n", None)
    if ceiling is not None and ns[-1] > ceiling:
        raise UsageError(f"n = {ns[-1]} exceeds the ceiling {ceiling} (raise it with --max-n)")
    return ns


def _grid(args, default: str) -> list[Fraction]:
    grid = args.grid if args.grid is not None else parse_grid(default)
    if any(not 0 <= p <= 1 for p in grid):
        raise UsageError("grid points must lie in [0, 1]")
    return grid


# -- commands ------------------------------------------------------------------------

EXACT_HEADER = [
    "n", "p", "p_float", "pA", "pA_float", "pJoint", "pJoint_float",
    "covariance", "covariance_float", "relativeCovariance", "relativeCovariance_float", "method",
]


def cmd_exact(args) -> int:
    ns = _n_values(args)
    if args.symbolic:
        payload = []
        for n in ns:
            pa = recursion.p_not_reach(n)
            pj = recursion.p_joint_not_reach(n)
            payload.append({
                "n": n,
                "pA": pa.to_json_list(),
                "pJoint": pj.to_json_list(),
                "covariance": (pj - pa * pa).to_json_list(),
            })
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    grid = _grid(args, "1/20:1:1/20")
    rows = []
    for n in ns:
        pa_poly = recursion.p_not_reach(n)
        pj_poly = recursion.p_joint_not_reach(n)
        for p in grid:
            pa, pj = pa_poly(p), pj_poly(p)
            cov = pj - pa * pa
            rel = cov / pj
            rows.append([
                n, fstr(p), ffloat(p), fstr(pa), ffloat(pa), fstr(pj), ffloat(pj),
                fstr(cov), ffloat(cov), fstr(rel), ffloat(rel), recursion.Method.EXACT.value,
            ])
    _emit(args, EXACT_HEADER, rows)
    return 0


SCAN_HEADER = ["n", "points", "min_p", "min_covariance", "min_covariance_float", "nonpositive_points"]


def scan_covariance(n: int, grid: Sequence[Fraction]) -> dict:
    cov = recursion.covariance_poly(n)
    vals = [(p, cov(p)) for p in grid]
    inner = [(p, v) for p, v in vals if p > 0]
    pool = inner or vals
    min_p, min_v = min(pool, key=lambda pv: (pv[1], pv[0]))
    bad = [p for p, v in inner if v <= 0]
    return {"n": n, "points": len(vals), "min_p": min_p, "min": min_v, "nonpositive": bad}


def cmd_scan(args) -> int:
    ns = _n_values(args)
    grid = _grid(args, "1/100:1:1/100")
    results = [scan_covariance(n, grid) for n in ns]
    rows = [
        [r["n"], r["points"], fstr(r["min_p"]), fstr(r["min"]), ffloat(r["min"]),
         " ".join(fstr(p) for p in r["nonpositive"])]
        for r in results
    ]
    _emit(args, SCAN_HEADER, rows)
    failed = [r["n"] for r in results if r["nonpositive"]]
    if failed:
        print(f"counterexample: non-positive covariance for n in {failed}", file=sys.stderr)
        return 2
    print("no counterexample found", file=sys.stderr)
    return 0


FIGURE_HEADER = ["series", "n", "p", "value", "value_float", "stderr"]


def cmd_figure(args) -> int:
    ns = _n_values(args)
    rows = []
    if args.which in (1, 2):
        grid = _grid(args, "1/50:1:1/50")
        for n in ns:
            pa_poly = recursion.p_not_reach(n)
            pj_poly = recursion.p_joint_not_reach(n)
            for p in grid:
                pj = pj_poly(p)
                if args.which == 1:
                    pa = pa_poly(p)
                    val = (pj - pa * pa) / pj
                    series = "relative_covariance"
                else:
                    val = pj / (1 - p / 2) ** (2 * n - 4)
                    series = "ratio"
                rows.append([series, n, fstr(p), fstr(val), ffloat(val), ""])
        for p in grid:
            asym = bounds.gnp_asymptote_exact(p) if args.which == 1 else 4 - p
            rows.append(["asymptote", "", fstr(p), fstr(asym), ffloat(asym), ""])
    else:
        grid = _grid(args, "1/20:1:1/20")
        for n in ns:
            if n > oracle.MAX_QUENCHED and not args.mc:
                raise UsageError(f"exact quenched values need n <= {oracle.MAX_QUENCHED}; pass --mc")
            cov = recursion.covariance_poly(n)
            for p in grid:
                v = cov(p)
                rows.append(["annealed", n, fstr(p), fstr(v), ffloat(v), ""])
            for i, p in enumerate(grid):
                if n <= oracle.MAX_QUENCHED:
                    v = oracle.oracle_quenched(n, p)
                    rows.append(["quenched", n, fstr(p), fstr(v), ffloat(v), ""])
                else:
                    est = oracle.quenched_mc(n, p, args.samples, args.seed + i)
                    rows.append(["quenched_mc", n, fstr(p), "", repr(est.mean), repr(est.stderr)])
    _emit(args, FIGURE_HEADER, rows)
    return 0


ORACLE_HEADER = ["n", "p", "event", "value", "method"]


def cmd_oracle(args) -> int:
    ns = _n_values(args, minimum=2)
    ev = oracle.NOT_REACH if args.event == "notreach" else oracle.JOINT_NOT_REACH
    rows = []
    for n in ns:
        if args.model == "tournament":
            rows.append([n, "1/1", args.event, fstr(oracle.oracle_tournament(n, ev)), "oracle"])
        elif args.model == "quenched":
            if args.symbolic:
                rows.append([n, "symbolic", "covariance", oracle.quenched_poly(n).to_json(), "oracle"])
            else:
                for p in _grid(args, "1/10:1:1/10"):
                    rows.append([n, fstr(p), "covariance", fstr(oracle.oracle_quenched(n, p)), "oracle"])
        elif args.symbolic:
            rows.append([n, "symbolic", args.event, oracle.oracle_annealed_poly(n, ev).to_json(), "oracle"])
        else:
            for p in _grid(args, "1/4:1:1/4"):
                rows.append([n, fstr(p), args.event, fstr(oracle.oracle_annealed_numeric(n, ev, p)), "oracle"])
    if args.format == "json" and args.symbolic and len(rows) == 1:
        _emit(args, ORACLE_HEADER, rows, payload={
            "n": rows[0][0], "event": rows[0][2], "polynomial": json.loads(rows[0][3]),
        })
    else:
        _emit(args, ORACLE_HEADER, rows)
    return 0


MC_HEADER = ["n", "p", "samples", "seed", "quantity", "mean", "stderr"]


def cmd_mc(args) -> int:
    ns = _n_values(args)
    if args.p is None:
        raise UsageError("give --p")
    if not 0 <= args.p <= 1:
        raise UsageError("p must lie in [0, 1]")
    if args.samples < 2:
        raise UsageError("samples must be >= 2")
    rows = []
    for n in ns:
        est = mc_gnp(n, args.p, args.samples, args.seed, workers=args.workers)
        for name, ci in est.items():
            rows.append([n, fstr(args.p), args.samples, args.seed, name, repr(ci.mean), repr(ci.stderr)])
    _emit(args, MC_HEADER, rows)
    return 0


GNM_HEADER = ["n", "m", "p", "quantity", "value", "stderr"]


def cmd_gnm(args) -> int:
    ns = _n_values(args)
    rows = []
    for n in ns:
        if args.m is not None:
            params = gnm.GnmParams(n, args.m)
        elif args.p is not None:
            params = gnm.GnmParams.from_p(n, args.p)
        else:
            raise UsageError("give --m or --p")
        p = params.p
        base = [n, params.m, fstr(p)]
        for l in args.l or []:
            if not 0 <= l <= params.N:
                raise UsageError(f"l must lie in [0, {params.N}]")
            rows.append(base + [f"q_exact[l={l}]", fstr(gnm.q_exact(l, params)), ""])
            rows.append(base + [f"q_asymptotic[l={l}]", repr(gnm.q_asymptotic(l, params)), ""])
        if 0 < p < 1:
            pf = float(p)
            rows.append(base + ["marginal_asymptotic", repr(gnm.gnm_marginal_asymptotic(n, pf)), ""])
            rows.append(base + ["joint_asymptotic", repr(gnm.gnm_joint_asymptotic(n, pf)), ""])
            rows.append(base + ["f", repr(gnm.f_function(pf)), ""])
            rows.append(base + ["f_derivative", repr(gnm.f_derivative(pf)), ""])
            rows.append(base + ["relative_covariance_limit", repr(gnm.relative_covariance_limit(pf)), ""])
        if n <= oracle.MAX_NUMERIC:
            for name, val in gnm.gnm_exact(n, params.m).items():
                rows.append(base + [f"exact_{name}", fstr(val), ""])
        if args.samples:
            est = gnm.gnm_mc_covariance(n, params.m, args.samples, args.seed, workers=args.workers)
            for name, ci in est.items():
                rows.append(base + [f"mc_{name}", repr(ci.mean), repr(ci.stderr)])
    _emit(args, GNM_HEADER, rows)
    return 0


BOUNDS_HEADER = ["n", "p", "quantity", "exact", "float"]


def cmd_bounds(args) -> int:
    ns = _n_values(args)
    rows = []
    payload = []
    for n in ns:
        rep = bounds.certify_tournament_positivity(n)
        for name in ("marginalLower", "marginalUpper", "jointLower", "exactMarginal", "exactJoint", "covariance"):
            val = getattr(rep, name)
            rows.append([n, "1/1", name, fstr(val), ffloat(val)])
        rows.append([n, "1/1", "positivityCertified", str(rep.positivityCertified).lower(), ""])
        rows.append([n, "1/1", "certificationPath", rep.certificationPath.value, ""])
        payload.append({
            "n": n,
            **{k: fstr(getattr(rep, k)) for k in (
                "marginalLower", "marginalUpper", "jointLower", "exactMarginal", "exactJoint", "covariance")},
            "positivityCertified": rep.positivityCertified,
            "certificationPath": rep.certificationPath.value,
        })
    _emit(args, BOUNDS_HEADER, rows, payload=payload)
    return 0


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orientcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, n_list=False):
        p.add_argument("--n", type=parse_int_list if n_list else (lambda s: [int(s)]),
                       help="vertex count" + (" (comma list allowed)" if n_list else ""))
        p.add_argument("--n-range", type=parse_range, help="inclusive range A:B")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("exact", help="exact probabilities from the recursion")
    common(p)
    p.add_argument("--grid", type=parse_grid)
    p.add_argument("--symbolic", action="store_true", help="emit polynomial JSON")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("scan", help="exact covariance positivity scan")
    common(p)
    p.add_argument("--grid", type=parse_grid)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("figure", help="long-format curve data")
    common(p, n_list=True)
    p.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--grid", type=parse_grid)
    p.add_argument("--mc", action="store_true", help="quenched series by sampling (n = 6)")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("oracle", help="brute-force enumeration")
    common(p)
    p.add_argument("--event", choices=("notreach", "joint"), default="joint")
    p.add_argument("--model", choices=("annealed", "tournament", "quenched"), default="annealed")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--grid", type=parse_grid)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("mc", help="Monte Carlo estimates in oriented G(n,p)")
    common(p)
    p.add_argument("--p", type=parse_rational)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gnm", help="oriented G(n,m) quantities")
    common(p)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=parse_rational, help="sets m = floor(p * C(n,2))")
    p.add_argument("--l", type=parse_int_list, help="constraint counts for q(l; n, m)")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_gnm)

    p = sub.add_parser("bounds", help="tournament bounds and positivity certificate")
    common(p)
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"orientcorr {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
