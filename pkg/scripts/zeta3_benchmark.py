#!/usr/bin/env python3
"""Run the order-2 benchmark at increasing depth and emit the log-error
trajectory plus the denominator-cleared error exponents (tab-separated, so
the columns drop straight into any plotting tool)."""

import argparse
import time

import mpmath

from aperylimits.apery import (
    clearing_lcm_power,
    delta_estimate,
    rec_run,
    zeta3_problem,
)
from aperylimits.identify import constant


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=500)
    parser.add_argument("--every", type=int, default=25)
    args = parser.parse_args()

    t0 = time.perf_counter()
    prob = zeta3_problem()
    a = rec_run(prob.rec, prob.init_a, args.n_max)
    b = rec_run(prob.rec, prob.init_b, args.n_max)
    digits = int(3.2 * args.n_max) + 80
    reference = constant("zeta3", digits)
    clearing = clearing_lcm_power(args.n_max + 1, multiplier=2, exponent=3)
    deltas = delta_estimate(a, b, reference, clearing)
    print(f"# computed in {time.perf_counter() - t0:.2f}s at {digits} digits")
    print("n\tlog10_error\tdelta")
    with mpmath.workdps(digits + 10):
        for n in range(args.every, args.n_max + 1, args.every):
            ratio = a[n] / b[n]
            err = abs(
                mpmath.mpf(ratio.numerator) / ratio.denominator - reference.value
            )
            log_err = mpmath.log10(err) if err > 0 else mpmath.mpf("-inf")
            delta = deltas[n].decimal(6) if deltas[n] is not None else "-"
            print(f"{n}\t{mpmath.nstr(log_err, 6)}\t{delta}")


if __name__ == "__main__":
    main()
