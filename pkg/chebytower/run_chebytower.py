"""
Command-line front end.

    chebytower poly N [--format text|json|csv]
    chebytower coeff N K [--method square|backsub|lemma|invariant] [--all-methods | --row | --levels]
    chebytower invariants KMAX [--method recursive|vandermonde|both] [--cache on|off]
    chebytower trees K [--mode count|list|weights|grouped|sum]
    chebytower verify [--n-max N] [--k-max K]
    chebytower cache {path|list|clear|warm KMAX}

Exit codes: 0 success, 2 domain error, 3 mathematical disagreement,
4 resource guard (reported as 2 by poly and trees).
"""

import argparse
import csv
import json
import logging
import os
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence

if __name__ == "__main__" and not __package__:
    sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

try:
    from . import __version__
    from . import cache as cache_store
    from .coeffs import (
        coeff_from_invariants,
        coeffs_backsub,
        coeffs_level_recursion,
        coeffs_level_rows,
        coeffs_square,
        vector_to_csv_rows,
        vector_to_json,
    )
    from .config import Settings
    from .errors import ChebytowerError, ConsistencyError, DomainError, ResourceGuardError
    from .invariants import (
        first_difference,
        invariants_recursive,
        invariants_vandermonde_table,
        table_to_json,
    )
    from .numeric import ceil_log2, format_int, format_rational, pow2
    from .polyseq import gen_p, gen_q, poly_to_csv_rows, poly_to_json, poly_to_text
    from .trees import (
        count,
        enumerate_trees,
        grouped_to_json,
        grouped_weights,
        render,
        tree_to_json,
        weighted_catalan,
    )
    from .verify import default_thetas, verify
except ImportError:
    from chebytower import __version__
    from chebytower import cache as cache_store
    from chebytower.coeffs import (
        coeff_from_invariants,
        coeffs_backsub,
        coeffs_level_recursion,
        coeffs_level_rows,
        coeffs_square,
        vector_to_csv_rows,
        vector_to_json,
    )
    from chebytower.config import Settings
    from chebytower.errors import ChebytowerError, ConsistencyError, DomainError, ResourceGuardError
    from chebytower.invariants import (
        first_difference,
        invariants_recursive,
        invariants_vandermonde_table,
        table_to_json,
    )
    from chebytower.numeric import ceil_log2, format_int, format_rational, pow2
    from chebytower.polyseq import gen_p, gen_q, poly_to_csv_rows, poly_to_json, poly_to_text
    from chebytower.trees import (
        count,
        enumerate_trees,
        grouped_to_json,
        grouped_weights,
        render,
        tree_to_json,
        weighted_catalan,
    )
    from chebytower.verify import default_thetas, verify

logger = logging.getLogger("chebytower")

COEFF_METHODS = ("square", "backsub", "lemma", "invariant")


def _dump_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _write_csv(rows, header: Optional[Sequence[str]] = None):
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if header:
        writer.writerow(header)
    writer.writerows(rows)


# ---------------------------------------------------------------------------
# poly
# ---------------------------------------------------------------------------

def cmd_poly(args, settings: Settings) -> int:
    build = gen_q if args.compose else gen_p
    p = build(args.n, settings.max_degree_log2)
    if args.format == "json":
        print(_dump_json(poly_to_json(p)))
    elif args.format == "csv":
        _write_csv(poly_to_csv_rows(p), ("k", "c") if args.header else None)
    else:
        print(poly_to_text(p))
    return 0


# ---------------------------------------------------------------------------
# coeff
# ---------------------------------------------------------------------------

def _coeff_square(n: int, k: int, settings: Settings) -> int:
    return coeffs_square(n, settings.max_degree_log2).values[k]


def _coeff_backsub(n: int, k: int, settings: Settings) -> int:
    return coeffs_backsub(n, settings.max_degree_log2).values[k]


def _coeff_lemma(n: int, k: int, settings: Settings) -> int:
    return coeffs_level_recursion(n, k).values[k]


def _coeff_invariant(n: int, k: int, settings: Settings) -> int:
    if n < max(1, ceil_log2(k) if k else 0):
        raise DomainError(f"the invariant route needs n >= max(1, eta_k), got n={n}, k={k}")
    if k == 0:
        return coeff_from_invariants(n, 0, None)
    return coeff_from_invariants(n, k, invariants_recursive(k))


_COEFF_ROUTES: Dict[str, Callable[[int, int, Settings], int]] = {
    "square": _coeff_square,
    "backsub": _coeff_backsub,
    "lemma": _coeff_lemma,
    "invariant": _coeff_invariant,
}


def _print_rows(args, n: int, k: int) -> int:
    """Row n (or rows 0..n with --levels) cut at index k, by the level recursion."""
    rows = coeffs_level_rows(n, k) if args.levels else [coeffs_level_recursion(n, k)]
    if args.format == "json":
        payload = [vector_to_json(row) for row in rows]
        print(_dump_json(payload if args.levels else payload[0]))
    elif args.format == "csv":
        _write_csv([r for row in rows for r in vector_to_csv_rows(row)],
                   ("n", "k", "c") if args.header else None)
    else:
        for row in rows:
            print(f"n={row.n}: " + " ".join(format_int(v) for v in row.values))
    return 0


def cmd_coeff(args, settings: Settings) -> int:
    n, k = args.n, args.k
    if n < 0 or k < 0:
        raise DomainError("n and k must be nonnegative")
    if k > pow2(n):
        raise DomainError(f"k={k} exceeds 2^{n}")

    if args.row or args.levels:
        return _print_rows(args, n, k)

    if args.all_methods and args.format == "csv":
        raise DomainError("--all-methods has no csv form; use text or json")

    if not args.all_methods:
        value = _COEFF_ROUTES[args.method](n, k, settings)
        if args.format == "json":
            print(_dump_json({"n": n, "k": k, "method": args.method, "value": format_int(value)}))
        elif args.format == "csv":
            _write_csv([(n, k, format_int(value))], ("n", "k", "c") if args.header else None)
        else:
            print(f"c[{n},{2 * k}] = {value} ({args.method})")
        return 0

    results: Dict[str, int] = {}
    for method in COEFF_METHODS:
        try:
            results[method] = _COEFF_ROUTES[method](n, k, settings)
        except (DomainError, ResourceGuardError) as exc:
            logger.info("method %s not applicable: %s", method, exc)
    agree = len(set(results.values())) <= 1
    if args.format == "json":
        print(_dump_json({
            "n": n,
            "k": k,
            "values": {m: format_int(v) for m, v in results.items()},
            "agree": agree,
        }))
    else:
        for method, value in results.items():
            print(f"c[{n},{2 * k}] = {value} ({method})")
        print(f"agree: {'true' if agree else 'false'}")
    if not agree:
        raise ConsistencyError(f"methods disagree on c[{n},{2 * k}]")
    return 0


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def _recursive_table(kmax: int, use_cache: bool, settings: Settings):
    if use_cache:
        return cache_store.load_or_compute(kmax, settings.cache_dir)
    return invariants_recursive(kmax)


def cmd_invariants(args, settings: Settings) -> int:
    use_cache = args.cache == "on"
    if args.method == "vandermonde":
        table = invariants_vandermonde_table(args.kmax)
        if use_cache:
            cache_store.save_table(table, settings.cache_dir)
    else:
        table = _recursive_table(args.kmax, use_cache, settings)
    if args.method == "both":
        other = invariants_vandermonde_table(args.kmax)
        diff = first_difference(table, other)
        if diff is not None:
            j, k = diff
            raise ConsistencyError(f"recursive and vandermonde tables differ at (j,k)=({j},{k})")

    if args.format == "json":
        print(_dump_json(table_to_json(table)))
    elif args.format == "csv":
        rows = [(j, k, format_rational(table.a(j, k)))
                for k in range(1, table.kmax + 1) for j in range(1, k + 1)]
        _write_csv(rows, ("j", "k", "a") if args.header else None)
    else:
        for k in range(1, table.kmax + 1):
            column = table.column(k)
            exact = ", ".join(format_rational(v) for v in column)
            if args.approx:
                approx = ", ".join(f"{float(v):.6g}" for v in column)
                print(f"k={k}: {exact} ({approx})")
            else:
                print(f"k={k}: {exact}")
    return 0


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------

def cmd_trees(args, settings: Settings) -> int:
    k, guard = args.k, settings.enumeration_guard
    if args.mode == "count":
        value = count(k)
        print(_dump_json({"k": k, "count": format_int(value)}) if args.format == "json" else value)
    elif args.mode == "list":
        trees = enumerate_trees(k, guard)
        if args.format == "json":
            print(_dump_json([tree_to_json(t) for t in trees]))
        else:
            for t in trees:
                print(render(t))
    elif args.mode == "weights":
        trees = enumerate_trees(k, guard)
        if args.format == "json":
            print(_dump_json([{"tree": render(t), "weight": format_rational(t.weight)} for t in trees]))
        else:
            for t in trees:
                print(f"{render(t)}: {format_rational(t.weight)}")
    elif args.mode == "grouped":
        groups = grouped_weights(k, guard)
        if args.format == "json":
            print(_dump_json(grouped_to_json(groups)))
        else:
            for monomial, multiplicity in groups.items():
                print(f"{monomial.render()}: {multiplicity}")
    else:
        value = weighted_catalan(k, args.method, guard)
        if args.format == "json":
            print(_dump_json({"k": k, "weighted_catalan": format_rational(value)}))
        else:
            print(format_rational(value))
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args, settings: Settings) -> int:
    thetas = default_thetas(args.thetas, args.seed)
    report = verify(
        args.n_max,
        args.k_max,
        settings.precision_bits,
        thetas=thetas,
        max_degree_log2=settings.max_degree_log2,
        enumeration_guard=settings.enumeration_guard,
    )
    print(report.to_json() if args.format == "json" else report.to_text())
    return 0 if report.passed else ConsistencyError.exit_code


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

def cmd_cache(args, settings: Settings) -> int:
    directory = settings.cache_dir
    if args.action == "path":
        print(directory)
    elif args.action == "list":
        for kmax in cache_store.list_cached(directory):
            print(cache_store.cache_path(kmax, directory))
    elif args.action == "clear":
        removed = cache_store.clear(directory) if directory.exists() else 0
        print(f"removed {removed} file(s)")
    else:
        if args.kmax is None:
            raise DomainError("cache warm needs KMAX")
        path = cache_store.save_table(invariants_recursive(args.kmax), directory)
        print(path)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for debug output (stderr)")
    common.add_argument("--max-degree-log2", type=int, default=None,
                        help="degree guard, log2 (env CHEBYTOWER_MAX_DEGREE_LOG2)")
    common.add_argument("--enum-guard", type=int, default=None,
                        help="largest tree count to enumerate (env CHEBYTOWER_ENUM_GUARD)")
    common.add_argument("--precision-bits", type=int, default=None,
                        help="working precision for residuals (env CHEBYTOWER_PRECISION_BITS)")
    common.add_argument("--cache-dir", default=None,
                        help="invariant cache directory (env CHEBYTOWER_CACHE_DIR)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="chebytower",
        description="Exact coefficients, invariants and weighted Catalan trees of the tower p_n = p_(n-1)^2 - 2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", parents=[common], help="print p_n")
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--header", action="store_true", help="CSV header row")
    p.add_argument("--compose", action="store_true", help="build q_n by composition instead")
    p.set_defaults(func=cmd_poly, guard_exit=DomainError.exit_code)

    c = sub.add_parser("coeff", parents=[common], help="print c_{n,2k}")
    c.add_argument("n", type=int)
    c.add_argument("k", type=int)
    c.add_argument("--method", choices=COEFF_METHODS, default="lemma")
    rows = c.add_mutually_exclusive_group()
    rows.add_argument("--all-methods", action="store_true",
                      help="run every applicable method and require agreement")
    rows.add_argument("--row", action="store_true", help="print c_{n,0..2k} instead of one entry")
    rows.add_argument("--levels", action="store_true", help="print rows 0..n, each cut at k")
    c.add_argument("--format", choices=("text", "json", "csv"), default="text")
    c.add_argument("--header", action="store_true", help="CSV header row")
    c.set_defaults(func=cmd_coeff)

    i = sub.add_parser("invariants", parents=[common], help="print the table a_{j,k}")
    i.add_argument("kmax", type=int)
    i.add_argument("--method", choices=("recursive", "vandermonde", "both"), default="recursive")
    i.add_argument("--cache", choices=("on", "off"), default="off")
    i.add_argument("--format", choices=("text", "json", "csv"), default="text")
    i.add_argument("--header", action="store_true", help="CSV header row")
    i.add_argument("--approx", action="store_true", help="append decimal approximations (text)")
    i.set_defaults(func=cmd_invariants)

    t = sub.add_parser("trees", parents=[common], help="labeled ordered trees T_k")
    t.add_argument("k", type=int)
    t.add_argument("--mode", choices=("count", "list", "weights", "grouped", "sum"), default="count")
    t.add_argument("--method", choices=("auto", "enumerate", "dp"), default="auto",
                   help="route for --mode sum")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.set_defaults(func=cmd_trees, guard_exit=DomainError.exit_code)

    v = sub.add_parser("verify", parents=[common], help="run the cross-validation suite")
    v.add_argument("--n-max", type=int, default=4)
    v.add_argument("--k-max", type=int, default=4)
    v.add_argument("--thetas", type=int, default=16, help="number of sample angles")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("cache", parents=[common], help="manage cached invariant tables")
    k.add_argument("action", choices=("path", "list", "clear", "warm"))
    k.add_argument("kmax", type=int, nargs="?")
    k.set_defaults(func=cmd_cache)
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logger.setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    start = time.perf_counter()
    try:
        settings = Settings.from_env(
            max_degree_log2=args.max_degree_log2,
            enumeration_guard=args.enum_guard,
            precision_bits=args.precision_bits,
            cache_dir=args.cache_dir,
        )
        status = args.func(args, settings)
    except ResourceGuardError as exc:
        logger.error("%s", exc)
        return getattr(args, "guard_exit", exc.exit_code)
    except ChebytowerError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    logger.info("%s finished in %.3f s", args.command, time.perf_counter() - start)
    return status


if __name__ == "__main__":
    sys.exit(main())
