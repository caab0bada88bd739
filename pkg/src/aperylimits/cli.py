"""Command-line front door.

Subcommands run the full discovery pipeline (telescope/guess, divisibility
check, fast limit, identification, catalog persistence) or its individual
stages.  Exit codes: 0 success, 2 parse/validation, 3 divisibility
violation, 4 non-convergent limit, 5 insufficient precision, 6 telescoping
order exceeded, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .apery import delta_estimate, limit_report, rec_run, zeta3_problem
from .catalog import Catalog, CatalogEntry, CatalogParseError
from .divisibility import (
    DivisibilityError,
    FamilySpec,
    build_problem,
    term_recurrence,
)
from .exact import InsufficientPrecisionError
from .guess import guess_recurrence
from .hyperterm import ProperTerm, franel, row_sum_jet
from .identify import DEFAULT_BASIS, constant, identify
from .telescope import OrderExceededError, check_certificate, zeilberger

EXIT_PARSE = 2
EXIT_DIVISIBILITY = 3
EXIT_NON_CONVERGENT = 4
EXIT_PRECISION = 5
EXIT_ORDER = 6


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _load_term(args) -> ProperTerm:
    if getattr(args, "term", None):
        with open(args.term, encoding="utf-8") as fh:
            return ProperTerm.from_json(json.load(fh))
    return franel(args.s, Fraction(args.a))


def _provenance(n: int, digits: int) -> dict:
    return {
        "tool": f"aperylimits {__version__}",
        "precision": digits,
        "N": n,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _identified_constant(match) -> str | None:
    """The single dictionary name a relation pins down, if there is one."""
    if match is None:
        return None
    named = [
        name
        for name, coeff in zip(match.basis, match.coefficients[1:])
        if coeff != 0 and name != "1"
    ]
    return named[0] if len(named) == 1 else None


def cmd_pipeline(args) -> int:
    try:
        spec = FamilySpec(args.s, args.r, Fraction(args.a))
    except ValueError as err:
        raise _CliError(EXIT_PARSE, f"invalid parameters: {err}") from None
    term = spec.term()
    catalog = Catalog(args.catalog)

    stage = "telescope"
    try:
        rec = term_recurrence(term, max_order=args.order)
        entry = CatalogEntry(
            term=term.to_json(),
            spec=spec.to_json(),
            recurrence=rec.to_json(),
            init_a=[],
            init_b=[],
            provenance=_provenance(args.N, args.digits),
        )
        existing = catalog.query(content=entry.hash)
        if existing and existing[0].failed_stage is None:
            print(f"already catalogued as {entry.hash[:16]}...")
            print(json.dumps(existing[0].to_json(), indent=2, sort_keys=True))
            return 0

        stage = "divisibility"
        problem = build_problem(spec, rec=rec)
        stage = "limit"
        report = limit_report(problem, args.N, args.digits)
        if args.trace:
            bs = rec_run(rec, problem.init_b, min(args.N, 8))
            print("B:", ", ".join(str(v) for v in bs))
        if report.digits_stable == 0:
            raise _CliError(EXIT_NON_CONVERGENT, f"non-convergent: {report.diagnosis}")
        stage = "identify"
        match = identify(
            report.limit, args.basis, max(20, min(48, args.digits // 2))
        )
        entry.init_a = [str(v) for v in problem.init_a]
        entry.init_b = [str(v) for v in problem.init_b]
        entry.limit_digits = report.limit.decimal()
        if report.alpha_estimate is not None:
            entry.alpha_estimate = report.alpha_estimate.decimal(10)
        if match is not None:
            entry.identification = match.to_json()
            entry.constant = _identified_constant(match)
        catalog.append(entry)
        print(f"catalogued {entry.hash[:16]}...")
        print(f"limit ({report.digits_stable} stable digits): {entry.limit_digits}")
        if match is not None:
            print(f"conjectured relation: coefficients {list(match.coefficients)} over {list(match.basis)}")
        return 0
    except _CliError:
        raise
    except (DivisibilityError, OrderExceededError, InsufficientPrecisionError) as err:
        failed = CatalogEntry(
            term=term.to_json(),
            spec={**spec.to_json(), "failed": stage},
            recurrence={"order": 0, "coeffs": [[1]], "rhs": "zero"} if stage == "telescope" else rec.to_json(),
            init_a=[],
            init_b=[],
            provenance=_provenance(args.N, args.digits),
            failed_stage=stage,
            error=str(err),
        )
        catalog.append(failed)
        code = {
            DivisibilityError: EXIT_DIVISIBILITY,
            OrderExceededError: EXIT_ORDER,
            InsufficientPrecisionError: EXIT_PRECISION,
        }[type(err)]
        raise _CliError(code, f"{stage} failed: {err}") from None


def cmd_bench_zeta3(args) -> int:
    problem = zeta3_problem()
    report = limit_report(problem, args.N, args.digits)
    if args.trace:
        bs = rec_run(problem.rec, problem.init_b, min(args.N, 8))
        print("B:", ", ".join(str(v) for v in bs))
    print(f"n_used: {report.n_used}")
    print(f"limit: {report.limit.decimal()}")
    print(f"digits_stable: {report.digits_stable}")
    print(f"diagnosis: {report.diagnosis}")
    if report.alpha_estimate is not None:
        print(f"alpha_estimate: {report.alpha_estimate.decimal(10)}")
    if args.digits >= 20 and report.digits_stable:
        import mpmath

        ref = constant("zeta3", args.digits)
        with mpmath.workdps(args.digits + 10):
            err = abs(report.limit.value - ref.value)
        print(f"|limit - zeta3| = {mpmath.nstr(err, 3)}")
    if args.delta:
        a = rec_run(problem.rec, problem.init_a, args.N)
        b = rec_run(problem.rec, problem.init_b, args.N)
        from .apery import clearing_lcm_power

        clearing = clearing_lcm_power(args.N + 1, multiplier=2, exponent=3)
        digits_needed = max(args.digits, int(3.1 * args.N) + 60)
        deltas = delta_estimate(a, b, constant("zeta3", digits_needed), clearing)
        shown = [d for d in deltas[-5:] if d is not None]
        for i, d in enumerate(shown):
            print(f"delta[{args.N - len(shown) + 1 + i}] = {d.decimal(6)}")
    return 0


def cmd_transform(args) -> int:
    term = _load_term(args)
    jet = row_sum_jet(term, args.n, args.order)
    print(json.dumps({"n": args.n, "coeffs": [str(c) for c in jet.coeffs]}))
    return 0


def cmd_guess(args) -> int:
    with open(args.seq, encoding="utf-8") as fh:
        data = [Fraction(str(v)) for v in json.load(fh)]
    rec = guess_recurrence(data, max_order=args.order, max_degree=args.degree)
    if rec is None:
        print("no recurrence found within the search bounds")
        return EXIT_ORDER
    print(json.dumps(rec.to_json()))
    return 0


def cmd_zeilberger(args) -> int:
    term = _load_term(args)
    try:
        rec, cert = zeilberger(term, max_order=args.order)
    except OrderExceededError as err:
        raise _CliError(EXIT_ORDER, str(err)) from None
    print(json.dumps(rec.to_json()))
    if args.trace:
        print("certificate:", json.dumps(cert.to_json()))
        print("lattice check:", check_certificate(term, rec, cert, 10))
    return 0


def cmd_identify(args) -> int:
    from .exact import BigFloat

    value = BigFloat.from_str(args.value, args.digits + 10)
    try:
        match = identify(value, args.basis, args.digits)
    except InsufficientPrecisionError as err:
        raise _CliError(EXIT_PRECISION, str(err)) from None
    if match is None:
        print("no relation found")
        return 1
    print(json.dumps(match.to_json(), sort_keys=True))
    return 0


def cmd_catalog(args) -> int:
    catalog = Catalog(args.catalog)
    entries = catalog.query(
        s=args.s, a=args.a, constant=args.constant, content=args.hash
    )
    for e in entries:
        print(json.dumps(e.to_json(), sort_keys=True))
    print(f"{len(entries)} entries", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aperylimits",
        description="turn binomial-type sums into fast limit evaluations of slow constants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, n_default=100, digits_default=60):
        p.add_argument("--N", type=int, default=n_default, help="recurrence steps")
        p.add_argument("--digits", type=int, default=digits_default, help="working precision")
        p.add_argument("--trace", action="store_true")

    p = sub.add_parser("pipeline", help="full discovery pipeline for (s, r, a)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", default="1")
    p.add_argument("--order", type=int, default=6, help="max telescoping order")
    p.add_argument("--catalog", default="catalog.jsonl")
    p.add_argument("--basis", nargs="*", default=list(DEFAULT_BASIS))
    add_common(p, 100, 80)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("bench-zeta3", help="run the built-in order-2 benchmark")
    add_common(p, 30, 60)
    p.add_argument("--delta", action="store_true", help="print trailing error exponents")
    p.set_defaults(fn=cmd_bench_zeta3)

    p = sub.add_parser("transform", help="print a deformed row sum as a jet")
    p.add_argument("--term", help="term JSON file")
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--a", default="1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, default=4)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("guess", help="guess a recurrence from a JSON sequence")
    p.add_argument("--seq", required=True, help="JSON file with a list of rationals")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--degree", type=int, default=6)
    p.set_defaults(fn=cmd_guess)

    p = sub.add_parser("zeilberger", help="telescoped recurrence for a term")
    p.add_argument("--term", help="term JSON file")
    p.add_argument("--s", type=int, default=3)
    p.add_argument("--a", default="1")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_zeilberger)

    p = sub.add_parser("identify", help="conjecture a closed form for a decimal value")
    p.add_argument("--value", required=True)
    p.add_argument("--digits", type=int, default=40)
    p.add_argument("--basis", nargs="*", default=list(DEFAULT_BASIS))
    p.set_defaults(fn=cmd_identify)

    p = sub.add_parser("catalog", help="query the catalog")
    p.add_argument("--catalog", default="catalog.jsonl")
    p.add_argument("--s", type=int)
    p.add_argument("--a")
    p.add_argument("--constant")
    p.add_argument("--hash")
    p.set_defaults(fn=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_PARSE if err.code not in (0, None) else 0
    try:
        return args.fn(args)
    except _CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except (FileNotFoundError, CatalogParseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as err:  # pragma: no cover - defensive
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
