"""Command line interface: ``calbch {beta,alpha,bch,verify,cross-validate}``.

Exit codes: 0 success, 1 a verification found a counterexample, 2 usage error,
3 internal invariant violation.  Set CALBCH_LOG to error, info or debug for
diagnostics on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from .errors import CalbchError

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3

log = logging.getLogger("calbch")

BETA_ENGINES = ("genfun", "recursion", "matrix", "hopf", "dot_direct")
ALPHA_ENGINES = ("recursion", "matrix", "hopf")
SUITES = ("lts", "hopf", "bch", "oracle", "all")


def _setup_logging() -> None:
    level = os.environ.get("CALBCH_LOG", "error").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="calbch", description="Exact BCH coefficients for Bruck and "
                                "commutative automorphic formal loops.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, engines, default in (("beta", BETA_ENGINES, "genfun"), ("alpha", ALPHA_ENGINES, "recursion")):
        sp = sub.add_parser(name, help=f"print the {name} coefficient table")
        sp.add_argument("--max-degree", type=int, default=None, help="maximal total degree p+q")
        sp.add_argument("--engine", choices=engines, default=default)
        sp.add_argument("--format", choices=("csv", "json", "latex"), default="csv")
        sp.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    sp = sub.add_parser("bch", help="print the BCH series in the free basis")
    sp.add_argument("--max-degree", type=int, default=7)
    sp.add_argument("--product", choices=("bruck", "dot"), default="dot")
    sp.add_argument("--engine", choices=("hopf", "dot_direct", "genfun", "recursion", "matrix"), default="hopf")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--brackets", action="store_true", help="spell keys as left-normed brackets")

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=SUITES, default="all")
    sp.add_argument("--degree", type=int, default=None, help="override the per-check degree")
    sp.add_argument("--identity", action="append", default=None, help="restrict the hopf suite")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("cross-validate", help="compare all engines pairwise and with the reference table")
    for eng, d in (("genfun", 14), ("recursion", 14), ("matrix", 14), ("hopf", 11), ("dot_direct", 7)):
        sp.add_argument(f"--{eng.replace('_', '-')}", type=int, default=d, dest=eng, metavar="N")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _check_bounds(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    from .bch import DEFAULT_DEGREE, MAX_DEGREE
    from . import identities

    if args.command in ("beta", "alpha", "bch"):
        if args.command == "bch" and args.engine == "genfun" and args.product == "bruck":
            parser.error("genfun only produces the commutative series")
        if args.command == "bch" and args.engine == "dot_direct" and args.product != "dot":
            parser.error("dot_direct only produces the commutative series")
        if args.max_degree is None:
            args.max_degree = DEFAULT_DEGREE[args.engine]
        hi = MAX_DEGREE[args.engine]
        if not (1 <= args.max_degree <= hi):
            parser.error(f"--max-degree for engine {args.engine} must lie in 1..{hi}")
    elif args.command == "verify":
        if args.degree is not None and not (1 <= args.degree <= identities.MAX_DEGREE):
            parser.error(f"--degree must lie in 1..{identities.MAX_DEGREE}")
        for name in args.identity or []:
            if name not in identities.CATALOGUE:
                parser.error(f"unknown identity {name!r}")
    elif args.command == "cross-validate":
        for eng in ("genfun", "recursion", "matrix", "hopf", "dot_direct"):
            v = getattr(args, eng)
            if not (0 <= v <= MAX_DEGREE[eng]) or (v == 0 and eng != "dot_direct"):
                parser.error(f"--{eng} must lie in 1..{MAX_DEGREE[eng]}")


def _write(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _cmd_table(args) -> int:
    from .bch import engine_table

    table = engine_table(args.command, args.engine, args.max_degree)
    _write(args.output, table.emit(args.format))
    return EXIT_OK


def _cmd_bch(args) -> int:
    from .bch import bch_dot_direct, bch_symbolic, engine_table, series_from_table

    kind = "beta" if args.product == "dot" else "alpha"
    if args.engine == "hopf":
        series = bch_symbolic(args.max_degree, args.product).series
    elif args.engine == "dot_direct":
        series = bch_dot_direct(args.max_degree).series
    else:
        series = series_from_table(engine_table(kind, args.engine, args.max_degree))
    key = lambda k: k.sort_key
    label = (lambda k: k.bracket_label()) if args.brackets else str
    if args.format == "json":
        from .linear import rat_str

        doc = {"product": args.product, "max_degree": args.max_degree, "engine": args.engine,
               "terms": [{"key": label(k), "value": rat_str(v)} for k, v in series.sorted_items(key)]}
        _write("-", (json.dumps(doc, indent=1) + "\n").encode())
    else:
        _write("-", (series.format(label, key) + "\n").encode())
    return EXIT_OK


def run_suite(suite: str, degree: Optional[int] = None, identities_: Optional[Sequence[str]] = None) -> List[Dict[str, Any]]:
    """Run one suite and return a list of report dicts (each with a ``failures`` list)."""
    reports: List[Dict[str, Any]] = []
    if suite in ("lts", "all"):
        from .calts import Free2, check_ca_axioms, check_derived_identities, derived_series, free_keys, \
            matrix_example_system, permutation_invariance
        from .linear import LinComb

        D = degree or 9
        for name, system in (("free2", Free2(D)), ("matrix_example", matrix_example_system())):
            rep = check_ca_axioms(system, max_degree=D)
            reports.append({"identity": f"ca_axioms[{name}]", "degree": D, "checked": sum(rep.checked.values()),
                            "failures": rep.failures})
        small = Free2(min(D, 7))
        els = [LinComb.basis(k) for k in free_keys(3)] + [LinComb({free_keys(1)[0]: 1, free_keys(1)[1]: 2})]
        fails = check_derived_identities(small, els)
        reports.append({"identity": "derived_identities", "degree": small.max_degree, "checked": len(els),
                        "failures": fails})
        bad = permutation_invariance(min(D, 9))
        reports.append({"identity": "bracket_permutation_invariance", "degree": min(D, 9), "checked": 1,
                        "failures": [{"witness": "".join(w)} for w in bad]})
        ds = derived_series(Free2(min(D, 7)).to_structure())
        reports.append({"identity": "solvable", "degree": min(D, 7), "checked": 1,
                        "failures": [] if ds.solvable else [{"dims": ds.dims}]})
    if suite in ("oracle", "all"):
        from .amodel import check_confluence, check_termination, oracle_mismatches, triple_span_dim
        from .calts import free2_dim

        D = degree or 9
        bad = oracle_mismatches(D)
        reports.append({"identity": "oracle_equivalence", "degree": D, "checked": 1,
                        "failures": [{"witness": [str(k) for k in t]} for t in bad]})
        reports.append({"identity": "confluence", "degree": 5, "checked": 1,
                        "failures": [{"witness": list(t)} for t in check_confluence()]})
        check_termination(min(2 * D, 14))
        dims = [(n, triple_span_dim(n), free2_dim(n)) for n in range(1, D + 1)]
        reports.append({"identity": "free2_dim", "degree": D, "checked": len(dims),
                        "failures": [{"n": n, "oracle": o, "closed_form": c} for n, o, c in dims if o != c]})
    if suite in ("hopf", "all"):
        from . import identities

        names = identities_ or identities.HOPF_SUITE
        for name in names:
            rep = identities.verify_identity(name, degree)
            log.info("%s: %d checks in %.2fs", name, rep.checked, rep.seconds)
            reports.append(rep.to_json_obj())
        rep = identities.tangent_check(degree + 2 if degree else 7)
        reports.append(rep.to_json_obj())
    if suite in ("bch", "all"):
        from .bch import bch_dot_direct, bch_symbolic, beta_genfun, symmetry_violations
        from .tables import table_differences

        D = degree or 7
        D = min(D, 9)
        direct = bch_dot_direct(D).table
        shortcut = bch_symbolic(D, "dot").table
        reports.append({"identity": "dot_direct_vs_shortcut", "degree": D, "checked": len(direct.entries),
                        "failures": table_differences(direct, shortcut)})
        reports.append({"identity": "shortcut_vs_genfun", "degree": D, "checked": len(shortcut.entries),
                        "failures": table_differences(shortcut, beta_genfun(D))})
        reports.append({"identity": "symmetry", "degree": D, "checked": len(shortcut.entries),
                        "failures": symmetry_violations(shortcut) + symmetry_violations(direct)})
    return reports


def _cmd_verify(args) -> int:
    reports = run_suite(args.suite, args.degree, args.identity)
    failed = any(r["failures"] for r in reports)
    if args.format == "json":
        _write("-", (json.dumps(reports, indent=1) + "\n").encode())
    else:
        lines = []
        for r in reports:
            status = "ok" if not r["failures"] else f"FAIL ({len(r['failures'])})"
            lines.append(f"{r['identity']:<32} degree {r['degree']:>2}  checked {r['checked']:>6}  {status}")
            for f in r["failures"][:3]:
                lines.append(f"    {json.dumps(f)}")
        _write("-", ("\n".join(lines) + "\n").encode())
    return EXIT_MISMATCH if failed else EXIT_OK


def _cmd_cross(args) -> int:
    from .bch import cross_validate

    degrees = {e: getattr(args, e) for e in ("genfun", "recursion", "matrix", "hopf", "dot_direct")}
    rep = cross_validate(degrees)
    if args.format == "json":
        doc = rep.to_json_obj()
        doc.pop("timings")
        _write("-", (json.dumps(doc, indent=1) + "\n").encode())
    else:
        lines = [f"engines: " + ", ".join(f"{k}={v}" for k, v in sorted(degrees.items()))]
        lines.append("agreement: all engines agree" if rep.ok else f"disagreements: {len(rep.disagreements)}")
        for d in rep.disagreements[:20]:
            lines.append("  " + json.dumps(d))
        _write("-", ("\n".join(lines) + "\n").encode())
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def run(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_bounds(parser, args)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    handlers = {"beta": _cmd_table, "alpha": _cmd_table, "bch": _cmd_bch, "verify": _cmd_verify,
                "cross-validate": _cmd_cross}
    try:
        return handlers[args.command](args)
    except (CalbchError, AssertionError) as e:
        log.error("invariant violation: %s", e)
        print(f"calbch: invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError) as e:
        print(f"calbch: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
