"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 validation or precondition failure,
4 capacity limit, 5 harness failure.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog, cohomology, spectra, verdict
from .errors import CapacityError, DomainError, ParseError, PreconditionError, ValidationError
from .report import build_report, capacity_hit
from .specfile import algebra_to_spec, dumps, load

EXIT_PARSE, EXIT_VALIDATION, EXIT_CAPACITY, EXIT_HARNESS = 2, 3, 4, 5


def _emit(doc, args):
    if getattr(args, "text", False):
        for line in _text_lines(doc):
            print(line)
    else:
        sys.stdout.write(dumps(doc))


def _text_lines(doc, prefix=""):
    if isinstance(doc, dict):
        for key in sorted(doc):
            yield from _text_lines(doc[key], f"{prefix}{key}." if prefix or key else key)
    else:
        yield f"{prefix.rstrip('.')}: {doc}"


def cmd_check(args):
    A = load(args.file)
    return {"name": A.name, "p": A.p, "dim": A.dim, "valid": True}, 0


def cmd_report(args):
    A = load(args.file)
    rep = build_report(A, ext=args.ext, timings=args.timings)
    return rep, EXIT_CAPACITY if capacity_hit(rep) else 0


def cmd_rank(args):
    A = load(args.file)
    if args.r is not None:
        ws = spectra.elementary_witnesses(A, args.r, args.ext)
        return {"r": args.r, "ext": args.ext, "count": len(ws), "witnesses": [w.space.basis.tolist() for w in ws]}, 0
    rr = spectra.elementary_rank(A, args.ext)
    return {
        "value": rr.rank,
        "ext": args.ext,
        "exhaustive": rr.exhaustive,
        "witness": rr.witness.space.basis.tolist(),
    }, 0


def cmd_catalog(args):
    if args.list:
        return {"builders": sorted(catalog.BUILDERS), "instances": [e.label for e in catalog.entries()]}, 0
    if not args.name:
        raise ParseError("catalog needs a builder name (or --list)")
    A = catalog.build(args.name, args.p, *args.param)
    doc = algebra_to_spec(A)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
        return {"written": args.emit, "name": A.name, "dim": A.dim}, 0
    return doc, 0


def cmd_cohomology(args):
    A = load(args.file)
    rep = cohomology.cohomology(A)
    return {
        "h1": rep.h1,
        "h2": rep.h2,
        "outer_derivations": cohomology.outer_dim(A),
        "h2_representatives": rep.h2_basis.tolist(),
    }, 0


def cmd_classify(args):
    A = load(args.file)
    return verdict.classify_rank_one(A, args.ext).as_dict(), 0


def cmd_saturation(args):
    ok = spectra.saturation_bound(args.dim, args.mu, args.rk, args.center, args.p, args.generic)
    return {"two_saturated_by_bound": ok}, 0


def cmd_harness(args):
    rep = verdict.theorem_harness(args.suite, args.p)
    return rep.as_dict(), 0 if rep.passed else EXIT_HARNESS


def build_parser():
    parser = argparse.ArgumentParser(prog="prank", description="Invariants of restricted Lie algebras over finite fields.")
    parser.add_argument("--text", action="store_true", help="plain key: value output instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a spec file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="full invariant report")
    p.add_argument("file")
    p.add_argument("--ext", type=int, default=1, help="extension degree k for point enumeration")
    p.add_argument("--timings", action="store_true", help="include per-section wall times")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("rank", help="p-rank or elementary subalgebras of a given dimension")
    p.add_argument("file")
    p.add_argument("--r", type=int)
    p.add_argument("--ext", type=int, default=1)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("catalog", help="build a named algebra")
    p.add_argument("name", nargs="?")
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--param", type=int, action="append", default=[], help="extra integer parameter (repeatable)")
    p.add_argument("--emit", metavar="PATH")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("cohomology", help="H^1, H^2 and outer derivations")
    p.add_argument("file")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("classify", help="recognise a p-rank one algebra")
    p.add_argument("file")
    p.add_argument("--ext", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("saturation", help="dimension bound for 2-saturation")
    for flag in ("--dim", "--mu", "--rk", "--center", "--p"):
        p.add_argument(flag, type=int, required=True)
    p.add_argument("--generic", action="store_true", help="algebra is generically toral")
    p.set_defaults(func=cmd_saturation)

    p = sub.add_parser("harness", help="theorem checks over the catalog")
    p.add_argument("--suite", default="all", choices=("all",) + verdict.SUITES)
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_harness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "ext", 1) < 1:
        parser.error("--ext must be >= 1")
    try:
        doc, code = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, PreconditionError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _emit(doc, args)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
