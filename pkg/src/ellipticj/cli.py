"""Command-line front end.

    ellipticj tau --n 3 --d 3 --constraints l:11 --j generic
    ellipticj sigma --n 2 --d 4 --constraints p:11
    ellipticj phi --n 3 --d 2 --constraints l:7 --i 1 --j-exp 1
    ellipticj rt --n 2 --d 2 --constraints p:5
    ellipticj table --family p3-lines --d 2..5 --format json

Exit codes: 0 success, 2 dimension error, 3 internal consistency
(non-integral invariant), 64 usage error, 65 unsupported ambient dimension,
66 unreadable cache file.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import cache as cachemod
from .arith import IntegralityError
from .constraints import (
    ConstraintMultiset,
    ConstraintParseError,
    ConstraintRangeError,
    sigma_dimension_defect,
    symbolic_parse,
)
from .intersections import UnsupportedAmbientError, phi
from .sigma import sigma
from .tau import DimensionError, JClass, rt_genus1, tau_general

EXIT_OK = 0
EXIT_DIMENSION = 2
EXIT_INTEGRALITY = 3
EXIT_USAGE = 64
EXIT_UNSUPPORTED = 65
EXIT_CACHE = 66

FAMILIES = {
    "p2-points": (2, lambda d: {2: 3 * d - 1}),
    "p3-lines": (3, lambda d: {2: 4 * d - 1}),
    "p4-planes": (4, lambda d: {2: 5 * d - 1}),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _degree_range(text: str) -> range:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected an integer or a range a..b, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    return range(lo, hi + 1)


def _family(text: str) -> tuple[int, object]:
    if text in FAMILIES:
        return FAMILIES[text]
    m = re.fullmatch(r"p3-points:(\d+)", text)
    if m:
        a = int(m.group(1))
        return 3, lambda d: {3: a, 2: 4 * d - 1 - 2 * a}
    raise argparse.ArgumentTypeError(
        f"unknown family {text!r}; choose from {', '.join(FAMILIES)} or p3-points:<a>"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ellipticj", description="Exact genus-0 and fixed-j genus-1 counts in P^n.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, need_n=True, ranged=False):
        if need_n:
            p.add_argument("--n", type=int, required=True, help="ambient dimension")
        if ranged:
            p.add_argument("--d", type=_degree_range, required=True, help="degree or range a..b")
        else:
            p.add_argument("--d", type=int, required=True, help="degree")
        p.add_argument("--format", choices=("plain", "json"), default="plain")
        p.add_argument("--cache", default=None, help=f"cache file (default: ${cachemod.CACHE_ENV})")

    p = sub.add_parser("sigma", help="genus-0 count")
    common(p)
    p.add_argument("--constraints", required=True)

    p = sub.add_parser("phi", help="c1(L*)^i ev*(H^j) on 1-marked curves")
    common(p)
    p.add_argument("--constraints", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j-exp", type=int, required=True)

    p = sub.add_parser("tau", help="genus-1 count with fixed j")
    common(p)
    p.add_argument("--constraints", required=True)
    p.add_argument("--j", choices=("generic", "0", "1728"), default="generic")

    p = sub.add_parser("rt", help="genus-1 perturbed invariant")
    common(p)
    p.add_argument("--constraints", required=True)

    p = sub.add_parser("table", help="tau for a constraint family over a degree range")
    common(p, need_n=False, ranged=True)
    p.add_argument("--family", type=_family, required=True, metavar="FAMILY")
    p.add_argument("--n", type=int, default=None, help="must match the family if given")
    return parser


def _open_cache(path: str | None, n: int) -> cachemod.Cache:
    path = path or os.environ.get(cachemod.CACHE_ENV)
    if path and os.path.exists(path):
        loaded = cachemod.Cache.load(path)
        if loaded.n != n:
            raise cachemod.CacheFormatError(f"cache file {path} holds P^{loaded.n} tables, query is P^{n}")
        cachemod.install(loaded)
        return loaded
    return cachemod.default_cache(n)


def _save_cache(path: str | None, cache: cachemod.Cache) -> None:
    path = path or os.environ.get(cachemod.CACHE_ENV)
    if path:
        cache.save(path)


def _number(x) -> int | str:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _tau_row(n: int, d: int, c: ConstraintMultiset, cache) -> dict:
    base = tau_general(n, d, c, JClass.GENERIC, cache)
    values = {j.label: base.nj_times_tau // j.n_j for j in JClass}
    for j in JClass:
        if values[j.label] * j.n_j != base.nj_times_tau:
            raise IntegralityError(f"tau for j={j.label} is not an integer at d={d}")
    return {
        "d": d,
        "constraints": c.to_text(),
        "tau": {"generic": values["generic"], "0": values["0"], "1728": values["1728"]},
        "nj_times_tau": base.nj_times_tau,
        "formula_path": base.path,
    }


def _execute(args, out: TextIO) -> None:
    if args.command == "table":
        fam_n, pattern = args.family
        if args.n is not None and args.n != fam_n:
            raise UsageError(f"family lives in P^{fam_n} but --n {args.n} was given")
        cache = _open_cache(args.cache, fam_n)
        rows = []
        for d in args.d:
            entries = pattern(d)
            if any(m < 0 for m in entries.values()):
                continue
            c = ConstraintMultiset.from_mapping(fam_n, entries)
            rows.append(_tau_row(fam_n, d, c, cache))
        _save_cache(args.cache, cache)
        if args.format == "json":
            json.dump(rows, out, indent=2)
            out.write("\n")
        else:
            out.write(f"# table n={fam_n} d={args.d.start}..{args.d.stop - 1}\n")
            out.write(f"{'d':>3}  {'constraints':<14} {'j generic':>24} {'j = 0':>24} {'j = 1728':>24}\n")
            for r in rows:
                t = r["tau"]
                out.write(f"{r['d']:>3}  {r['constraints']:<14} {t['generic']:>24} {t['0']:>24} {t['1728']:>24}\n")
        return

    n, d = args.n, args.d
    if args.command == "tau" and not 2 <= n <= 4:
        raise UnsupportedAmbientError(f"tau is supported for 2 <= n <= 4 only, got n={n}")
    c = symbolic_parse(args.constraints, n)
    cache = _open_cache(args.cache, n)
    before = dict(cache.stats.as_dict())
    query = {"command": args.command, "n": n, "d": d, "constraints": c.to_text()}

    if args.command == "sigma":
        defect = sigma_dimension_defect(n, d, c)
        if defect:
            raise DimensionError(f"sigma dimension defect {defect:+d} for {c}", defect)
        result = {"value": sigma(n, d, c, cache), "formula_path": "sigma-recursion"}
    elif args.command == "phi":
        query.update(i=args.i, j_exp=args.j_exp)
        result = {"value": _number(phi(n, d, args.i, args.j_exp, c, cache)), "formula_path": "phi-recursion"}
    elif args.command == "rt":
        if not len(c):
            raise UsageError("rt needs at least one constraint")
        beta1 = next(iter(c))
        rest = ConstraintMultiset(n, c.counts).add(beta1, -1)
        result = {"value": rt_genus1(n, d, beta1, rest, cache), "formula_path": "genus1-degeneration"}
    else:
        j = JClass.parse(args.j)
        query["j"] = j.label
        res = tau_general(n, d, c, j, cache)
        result = {"tau": res.value, "nj_times_tau": res.nj_times_tau, "n_j": j.n_j, "formula_path": res.path}

    _save_cache(args.cache, cache)
    after = cache.stats.as_dict()
    stats = {k: after[k] - before[k] for k in after}
    if args.format == "json":
        json.dump({"query": query, "result": result, "stats": stats}, out, indent=2)
        out.write("\n")
        return
    out.write("# " + " ".join(f"{k}={v}" for k, v in query.items()) + "\n")
    if "tau" in result:
        out.write(f"tau = {result['tau']}\n")
        out.write(f"n_j = {result['n_j']}\n")
        out.write(f"n_j*tau = {result['nj_times_tau']}\n")
    else:
        out.write(f"value = {result['value']}\n")
    out.write(f"formula_path = {result['formula_path']}\n")


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _execute(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except UnsupportedAmbientError as exc:
        err.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED
    except DimensionError as exc:
        err.write(f"dimension error (defect {exc.defect:+d}): {exc}\n")
        return EXIT_DIMENSION
    except IntegralityError as exc:
        err.write(f"internal consistency error: {exc}\n")
        return EXIT_INTEGRALITY
    except (ConstraintParseError, ConstraintRangeError) as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except cachemod.CacheFormatError as exc:
        err.write(f"cache error: {exc}\n")
        return EXIT_CACHE
    except ValueError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
