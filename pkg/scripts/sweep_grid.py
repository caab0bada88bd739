#!/usr/bin/env python3
"""Sweep a small (s, r, a) grid through the full pipeline and collect the
identified limits into a catalog."""

import argparse
import time
from fractions import Fraction

from aperylimits.apery import limit_report
from aperylimits.catalog import Catalog, CatalogEntry
from aperylimits.cli import _identified_constant, _provenance
from aperylimits.divisibility import FamilySpec, build_problem, term_recurrence
from aperylimits.hyperterm import franel
from aperylimits.identify import DEFAULT_BASIS, identify


def run_cell(s: int, r: int, a: Fraction, n_max: int, digits: int, catalog: Catalog):
    spec = FamilySpec(s, r, a)
    term = franel(s, a)
    rec = term_recurrence(term)
    problem = build_problem(spec, rec=rec)
    report = limit_report(problem, n_max, digits)
    match = identify(report.limit, DEFAULT_BASIS, max(20, digits // 2))
    entry = CatalogEntry(
        term=term.to_json(),
        spec=spec.to_json(),
        recurrence=rec.to_json(),
        init_a=[str(v) for v in problem.init_a],
        init_b=[str(v) for v in problem.init_b],
        limit_digits=report.limit.decimal(),
        identification=match.to_json() if match else None,
        constant=_identified_constant(match),
        provenance=_provenance(n_max, digits),
    )
    fresh = catalog.append(entry)
    label = entry.constant or ("relation" if match else "unidentified")
    print(
        f"s={s} r={r} a={a}: {report.limit.decimal(20)}  [{label}]"
        f"{'' if fresh else '  (already catalogued)'}"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--catalog", default="catalog.jsonl")
    parser.add_argument("--s", type=int, nargs="*", default=[3, 4, 5])
    parser.add_argument("--a", nargs="*", default=["1", "2"])
    parser.add_argument("--N", type=int, default=120)
    parser.add_argument("--digits", type=int, default=60)
    args = parser.parse_args()

    catalog = Catalog(args.catalog)
    t0 = time.perf_counter()
    for s in args.s:
        for a in args.a:
            for r in range(1, s):
                try:
                    run_cell(s, r, Fraction(a), args.N, args.digits, catalog)
                except Exception as err:
                    print(f"s={s} r={r} a={a}: failed ({type(err).__name__}: {err})")
    print(f"# sweep finished in {time.perf_counter() - t0:.1f}s -> {args.catalog}")


if __name__ == "__main__":
    main()
