"""``qma-verify`` command line entry point."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .matfile import InputError
from .ncalgebra import QuantumMatrixAlgebra
from .rmatrix import FAMILIES, FAMILY_NOTES, UnknownFamily, ValidationError, builtin, validate
from .verifier import CHECKS, SuiteConfig, run_suite


def _parse_checks(text: str) -> List[str]:
    if text.strip() == "all":
        return list(CHECKS)
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {', '.join(CHECKS)} or 'all'")
    # preflight always runs; listing it is allowed but redundant
    return names


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qma-verify", description="Exact verification of quantum matrix algebra identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run preflight and identity checks, write a JSON report")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--family", choices=[f for f in FAMILIES if f != "custom"])
    src.add_argument("--r-matrix", metavar="FILE")
    c.add_argument("--f-matrix", metavar="FILE")
    c.add_argument("--n", type=int, default=None, help="dimension N (default 2 for built-ins)")
    c.add_argument("--kmax", type=int, default=None, help="largest k checked (default: the height n)")
    c.add_argument("--nmax", type=int, default=None, help="height search bound (required for custom input)")
    c.add_argument("--mode", choices=("exact", "fast"), default="exact")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=5, help="q samples in fast mode")
    c.add_argument("--checks", type=_parse_checks, default=list(CHECKS), help="comma list or 'all'")
    c.add_argument("--out", default="-", help="report path ('-' for stdout)")
    c.add_argument("--timings", action="store_true", help="record elapsed_ms (reports become non-reproducible)")
    c.add_argument("--drop-relations", type=int, default=0, metavar="K",
                   help="negative control: omit the first K defining relations")

    sub.add_parser("families", help="list built-in R-matrix pairs")

    d = sub.add_parser("describe", help="summarize a built-in pair")
    d.add_argument("--family", required=True, choices=[f for f in FAMILIES if f != "custom"])
    d.add_argument("--n", type=int, default=2)
    return ap


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _check(args) -> int:
    custom = args.r_matrix is not None
    if custom != (args.f_matrix is not None):
        print("error: --r-matrix and --f-matrix must be given together", file=sys.stderr)
        return 2
    if not custom and args.family is None:
        print("error: give --family or --r-matrix/--f-matrix", file=sys.stderr)
        return 2
    config = SuiteConfig(
        family="custom" if custom else args.family,
        N=args.n if args.n is not None else (0 if custom else 2),
        kmax=args.kmax,
        nmax=args.nmax,
        checks=args.checks,
        mode=args.mode,
        seed=args.seed,
        samples=args.samples,
        out=args.out,
        r_matrix=args.r_matrix,
        f_matrix=args.f_matrix,
        timings=args.timings,
        drop_relations=args.drop_relations,
    )
    try:
        report = run_suite(config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit(exc.report.to_json(), args.out)
        return 2
    _emit(report.to_json(), args.out)
    agg = report.aggregate
    print(f"{agg['status']}: {agg['passed']} passed, {agg['failed']} failed, {agg['errors']} errors", file=sys.stderr)
    return report.exit_code


def _describe(args) -> int:
    try:
        pair = builtin(args.family, args.n)
    except UnknownFamily as exc:
        print(f"error: unknown family {exc}", file=sys.stderr)
        return 2
    try:
        validate(pair)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    alg = QuantumMatrixAlgebra(pair)
    N = pair.N
    diag = [str(pair.D.get((i,), (i,))) for i in range(N)]
    lines = [
        f"family:    {args.family}",
        f"about:     {FAMILY_NOTES[args.family]}",
        f"N:         {N}",
        f"q:         {pair.q_param}",
        f"height:    {pair.height}",
        f"D (diag):  {', '.join(diag)}",
        f"relations: {len(alg.relations())} nonzero, ideal dim in degree 2 = {alg.ideal(2).dimension}",
    ]
    print("\n".join(lines))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "families":
        for f in FAMILIES:
            print(f"{f:24s} {FAMILY_NOTES[f]}")
        return 0
    if args.command == "describe":
        return _describe(args)
    return _check(args)


if __name__ == "__main__":
    sys.exit(main())
