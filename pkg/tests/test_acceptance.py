"""Acceptance suite: one test per criterion, each printing a PASS line and
enforcing its runtime budget (run with -s to see the lines)."""

import time
from fractions import Fraction

import mpmath
import pytest

from aperylimits.apery import (
    clearing_lcm_power,
    delta_estimate,
    limit_report,
    rec_run,
    zeta3_problem,
)
from aperylimits.divisibility import (
    FamilySpec,
    build_problem,
    find_alpha,
    slow_oracle,
    term_recurrence,
    valuation_check,
)
from aperylimits.exact import BigFloat, PolyQ
from aperylimits.guess import guess_recurrence, rec_residuals
from aperylimits.hyperterm import c2_closed_form, coeff_c, franel, row_sum
from aperylimits.identify import constant, identify
from aperylimits.recurrence import Recurrence
from aperylimits.telescope import (
    RationalFunction,
    check_certificate,
    gosper,
    zeilberger,
)

F = Fraction


@pytest.fixture(scope="module")
def telescoped():
    return {s: zeilberger(franel(s)) for s in (1, 2, 3)}


def test_criterion_1_zeta3_benchmark():
    t0 = time.perf_counter()
    prob = zeta3_problem()
    b = rec_run(prob.rec, prob.init_b, 30)
    assert b[:5] == [1, 5, 73, 1445, 33001]
    report = limit_report(prob, 30, 60)
    reference = constant("zeta3", 60)  # dual-route oracle
    with mpmath.workdps(80):
        err = abs(report.limit.value - reference.value)
        assert err < mpmath.mpf(10) ** -20
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"criterion 1 (zeta3 benchmark): PASS, error < 1e-20, {elapsed:.2f}s < 1s")


def test_criterion_2_delta_window():
    t0 = time.perf_counter()
    prob = zeta3_problem()
    a = rec_run(prob.rec, prob.init_a, 500)
    b = rec_run(prob.rec, prob.init_b, 500)
    clearing = clearing_lcm_power(501, multiplier=2, exponent=3)
    limit = constant("zeta3", 1700)
    deltas = delta_estimate(a, b, limit, clearing)
    window = [d.value for d in deltas[300:501] if d is not None]
    assert len(window) > 150
    assert all(0.06 < d < 0.10 for d in window)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    lo, hi = float(min(window)), float(max(window))
    print(
        f"criterion 2 (delta in [0.06, 0.10]): PASS, range [{lo:.4f}, {hi:.4f}], "
        f"{elapsed:.2f}s < 60s"
    )


def test_criterion_3_order2_coefficient_closed_form():
    t0 = time.perf_counter()
    checked = 0
    for s in (1, 2, 3, 4):
        term = franel(s)
        for n in range(26):
            for k in range(n + 1):
                assert coeff_c(term, 2, n, k) == c2_closed_form(s, n, k)
                checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    print(
        f"criterion 3 (closed form for order-2 coefficients): PASS, "
        f"{checked} exact equalities, {elapsed:.2f}s < 30s"
    )


def test_criterion_4_right_side_valuations():
    t0 = time.perf_counter()
    results = []
    for s, a, minimum in [(3, 1, 4), (4, 1, 4), (5, 1, 6), (3, 2, 3)]:
        term = franel(s, a)
        rec = term_recurrence(term)
        report = valuation_check(term, rec, 40)
        assert report.passed
        assert report.min_valuation >= minimum
        results.append(f"s={s},a={a}: {report.min_valuation}>={minimum}")
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    print(
        f"criterion 4 (right-side valuations): PASS ({'; '.join(results)}), "
        f"{elapsed:.1f}s < 120s"
    )


def test_criterion_5_three_zeta2_pipeline():
    t0 = time.perf_counter()
    spec = FamilySpec(3, 2, 1)
    rec = term_recurrence(spec.term())
    problem = build_problem(spec, rec=rec)
    report = limit_report(problem, 100, 80)
    with mpmath.workdps(100):
        target = 3 * constant("zeta2", 90).value
        assert abs(report.limit.value - target) < mpmath.mpf(10) ** -40
    match = identify(report.limit, ["1", "zeta2"], 40)
    assert match is not None
    m0, m1, m2 = match.coefficients
    assert m1 == 0 and m2 == -3 * m0
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    print(
        f"criterion 5 (limit = 3*zeta2 identified): PASS, coefficients "
        f"{list(match.coefficients)}, {elapsed:.2f}s < 30s"
    )


def test_criterion_6_telescoping(telescoped):
    t0 = time.perf_counter()
    assert [telescoped[s][0].order for s in (1, 2, 3)] == [1, 1, 2]
    for s in (1, 2, 3):
        rec, cert = telescoped[s]
        data = [row_sum(franel(s), n) for n in range(30 + rec.order)]
        assert all(v == 0 for v in rec_residuals(rec, data)[:30])
        assert check_certificate(franel(s), rec, cert, 20)
    seq = [row_sum(franel(3), n) for n in range(30)]
    guessed = guess_recurrence(seq, max_order=3, max_degree=3)
    assert guessed == telescoped[3][0].normalized()
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    print(
        f"criterion 6 (telescoping orders 1,1,2 + certified + guess agreement): "
        f"PASS, {elapsed:.2f}s < 120s"
    )


def test_criterion_7_fast_slow_crosscheck():
    t0 = time.perf_counter()
    term = franel(3, 2)
    alpha = find_alpha(term)
    with mpmath.workdps(45):
        closed = mpmath.cbrt(2) / (1 + mpmath.cbrt(2))
        assert abs(alpha - closed) < mpmath.mpf(10) ** -30
    spec = FamilySpec(3, 2, 2, alpha=alpha)
    problem = build_problem(spec, rec=term_recurrence(term))
    fast = limit_report(problem, 200, 80)
    errors = []
    with mpmath.workdps(90):
        for n in (12500, 25000, 50000, 100000):
            v = slow_oracle(spec, n)
            errors.append(abs(mpmath.mpf(v.numerator) / v.denominator - fast.limit.value))
    assert all(b < a for a, b in zip(errors, errors[1:]))  # monotone approach
    assert errors[-1] < 0.005
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    print(
        f"criterion 7 (fast/slow agreement at 5e-3): PASS, final gap "
        f"{float(errors[-1]):.2e}, monotone, {elapsed:.1f}s < 300s"
    )


def test_criterion_8_gosper():
    t0 = time.perf_counter()
    found = gosper(RationalFunction(PolyQ([1, 2, 1]), PolyQ([0, 1])))
    assert found is not None
    # identity S(k+1) r(k) - S(k) = 1 re-verified on values
    r = RationalFunction(PolyQ([1, 2, 1]), PolyQ([0, 1]))
    for k in (2, 3, 9):
        assert found.shift(1)(F(k)) * r(F(k)) - found(F(k)) == 1
    absent = gosper(RationalFunction(PolyQ([0, 1]), PolyQ([1, 1])))
    assert absent is None
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"criterion 8 (gosper finds k*k!, refuses 1/k): PASS, {elapsed:.2f}s < 1s")


def test_criterion_9_negative_controls(telescoped):
    t0 = time.perf_counter()
    # 1: corrupted recurrence coefficients fail the certificate check
    rec, cert = telescoped[3]
    corrupted = Recurrence([rec.coeffs[0], rec.coeffs[1] + PolyQ([0, 1]), rec.coeffs[2]])
    assert not check_certificate(franel(3), corrupted, cert, 10)

    # 2: a wrong limit drives the error exponent to -1
    prob = zeta3_problem()
    a = rec_run(prob.rec, prob.init_a, 80)
    b = rec_run(prob.rec, prob.init_b, 80)
    clearing = clearing_lcm_power(81, multiplier=2, exponent=3)
    wrong = BigFloat.from_fraction(F(3), 60)
    deltas = delta_estimate(a, b, wrong, clearing)
    tail = [d.value for d in deltas[-10:] if d is not None]
    assert all(abs(d + 1) < 0.05 for d in tail)

    # 3: identify withdraws relations that fail the residual-shrink test
    with mpmath.workdps(90):
        near_miss = BigFloat.from_mpf(
            constant("zeta3", 80).value + mpmath.mpf(10) ** -22, 60
        )
    assert identify(near_miss, ["1", "zeta3"], 20) is None
    elapsed = time.perf_counter() - t0
    print(f"criterion 9 (negative controls): PASS, {elapsed:.2f}s")
