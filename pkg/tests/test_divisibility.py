from fractions import Fraction

import mpmath
import pytest

from aperylimits.apery import limit_report, rec_run
from aperylimits.divisibility import (
    BoundaryMaximumError,
    DivisibilityError,
    RecurrenceMismatchError,
    FamilySpec,
    build_problem,
    coefficient_sequence,
    expected_valuation,
    find_alpha,
    initial_data,
    normalized_coeff_fast,
    rhs_jet,
    slow_oracle,
    term_recurrence,
    valuation_check,
)
from aperylimits.exact import PolyQ
from aperylimits.guess import guess_recurrence, rec_residuals
from aperylimits.hyperterm import ProperTerm, coeff_c, franel
from aperylimits.recurrence import Recurrence

F = Fraction


@pytest.fixture(scope="module")
def rec3():
    return term_recurrence(franel(3))


def test_rhs_jet_vanishes_to_fourth_order(rec3):
    jet = rhs_jet(franel(3), rec3, 1, 4)
    assert jet.coeffs[:4] == (0, 0, 0, 0)
    assert jet.valuation() == 4


def test_rhs_jet_order_zero_is_zero(rec3):
    assert rhs_jet(franel(3), rec3, 2, 0).is_zero()


def test_rhs_jet_rejects_wrong_recurrence():
    wrong = Recurrence([PolyQ([-3]), PolyQ([1])])
    with pytest.raises(RecurrenceMismatchError):
        rhs_jet(franel(3), wrong, 1, 3)


def test_expected_valuation_rule():
    assert expected_valuation(3, 1) == 4
    assert expected_valuation(4, 1) == 4
    assert expected_valuation(5, 1) == 6
    assert expected_valuation(3, 2) == 3


def test_valuation_check_small(rec3):
    report = valuation_check(franel(3), rec3, 12)
    assert report.passed and report.min_valuation >= 4
    assert report.s == 3 and report.a == 1
    assert report.jet_order == 5


def test_valuation_check_even_power():
    term = franel(4)
    report = valuation_check(term, term_recurrence(term), 8)
    assert report.passed and report.min_valuation >= 4


def test_valuation_check_requires_margin(rec3):
    with pytest.raises(ValueError):
        valuation_check(franel(3), rec3, 5, order=4)


def test_coefficient_sequences_satisfy_base_recurrence(rec3):
    # the divisibility is exactly what makes these sequences solutions
    term = franel(3)
    for r in (1, 2, 3):
        seq = coefficient_sequence(term, r, 30)
        assert all(v == 0 for v in rec_residuals(rec3, seq))


def test_coefficient_sequence_is_guessable(rec3):
    seq = coefficient_sequence(franel(3), 2, 40)
    guessed = guess_recurrence(seq, max_order=3, max_degree=3)
    assert guessed == rec3.normalized()


def test_find_alpha_exact_cases():
    assert find_alpha(franel(3)) == F(1, 2)
    assert find_alpha(franel(7)) == F(1, 2)
    assert find_alpha(franel(2, 4)) == F(2, 3)
    assert find_alpha(franel(1, F(1, 2))) == F(1, 3)


def test_find_alpha_numeric_case():
    alpha = find_alpha(franel(3, 2))
    with mpmath.workdps(45):
        closed = mpmath.cbrt(2) / (1 + mpmath.cbrt(2))
        assert abs(alpha - closed) < mpmath.mpf(10) ** -30


def test_find_alpha_ignores_polynomial_scaling():
    # a constant polynomial part rescales the summand but not the argmax
    from aperylimits.hyperterm import Poly2

    base = franel(3)
    scaled = ProperTerm(Poly2([[5]]), base.num_factors, base.den_factors, base.weight)
    alpha = find_alpha(scaled)
    with mpmath.workdps(45):
        assert abs(alpha - F(1, 2)) < mpmath.mpf(10) ** -29


def test_find_alpha_boundary_maximum():
    # strictly increasing summand: maximizer at the right edge
    term = ProperTerm(num_factors=[(0, 1, 0)], weight=3)
    with pytest.raises(BoundaryMaximumError):
        find_alpha(term)


def test_theorem_spec_bounds():
    FamilySpec(3, 2, 1)
    with pytest.raises(ValueError):
        FamilySpec(2, 1, 1)
    with pytest.raises(ValueError):
        FamilySpec(3, 3, 1)
    with pytest.raises(ValueError):
        FamilySpec(3, 0, 1)
    with pytest.raises(ValueError):
        FamilySpec(3, 1, 0)


def test_normalized_coeff_fast_matches_jets():
    for s in (2, 3, 4):
        term = franel(s)
        for n in range(1, 14):
            for k in range(n + 1):
                assert normalized_coeff_fast(s, 2, n, k) == coeff_c(term, 2, n, k)
    # a couple of higher orders
    assert normalized_coeff_fast(4, 3, 9, 4) == coeff_c(franel(4), 3, 9, 4)


def test_build_problem_example(rec3):
    prob = build_problem(FamilySpec(3, 2, 1), rec=rec3)
    assert prob.init_b == (1, 2)
    assert prob.init_a == (0, 12)
    a = rec_run(prob.rec, prob.init_a, 3)
    assert a[2] == 48
    assert a[3] == F(832, 3)  # ratio 2496/504 against B(3) = 56


def test_nonunit_weight_valuation_is_exactly_s():
    term = franel(3, 2)
    rec = term_recurrence(term)
    report = valuation_check(term, rec, 10)
    assert report.passed
    assert report.min_valuation == 3


def test_build_problem_rejects_insufficient_valuation(rec3, monkeypatch):
    import aperylimits.divisibility as D

    def failing_check(term, rec, n_max, order=None):
        return D.DivisibilityReport(3, F(1), 5, n_max, 1, 4, False)

    monkeypatch.setattr(D, "valuation_check", failing_check)
    with pytest.raises(DivisibilityError):
        D.build_problem(FamilySpec(3, 2, 1), rec=rec3)


def test_initial_data_r0_degenerates(rec3):
    prob = initial_data(franel(3), rec3, 0)
    assert prob.init_a == prob.init_b


def test_fast_limit_is_three_zeta2(rec3):
    prob = build_problem(FamilySpec(3, 2, 1), rec=rec3)
    report = limit_report(prob, 60, 50)
    with mpmath.workdps(60):
        assert abs(report.limit.value - 3 * mpmath.zeta(2)) < mpmath.mpf(10) ** -40
    assert report.diagnosis == "exponential"


def test_fast_limit_vanishes_for_odd_r(rec3):
    prob = build_problem(FamilySpec(3, 1, 1), rec=rec3)
    report = limit_report(prob, 60, 50)
    with mpmath.workdps(60):
        assert abs(report.limit.value) < mpmath.mpf(10) ** -40


def test_slow_oracle_examples():
    spec = FamilySpec(3, 2, 1)
    value = slow_oracle(spec, 1000)
    with mpmath.workdps(30):
        assert abs(mpmath.mpf(value.numerator) / value.denominator - 3 * mpmath.zeta(2)) < 0.01
    odd = FamilySpec(3, 1, 1)
    assert slow_oracle(odd, 10) == 0
    assert slow_oracle(odd, 1000) == 0
    tiny = FamilySpec(3, 2, 1)
    assert slow_oracle(tiny, 1) == coeff_c(franel(3), 2, 1, 0)


def test_fast_and_slow_sides_agree_at_unit_weight(rec3):
    # the exponentially convergent realization against the O(1/n) direct value
    prob = build_problem(FamilySpec(3, 2, 1), rec=rec3)
    fast = limit_report(prob, 100, 60)
    slow = slow_oracle(FamilySpec(3, 2, 1), 10**5)
    with mpmath.workdps(70):
        gap = abs(mpmath.mpf(slow.numerator) / slow.denominator - fast.limit.value)
        assert gap < 5e-3


def test_slow_oracle_matches_direct_small():
    spec = FamilySpec(3, 2, 2)
    alpha = find_alpha(spec.term())
    for n in (5, 9, 17):
        with mpmath.workdps(40):
            k = int(mpmath.floor(alpha * n))
        assert slow_oracle(spec, n) == coeff_c(franel(3), 2, n, k)


def test_json_roundtrip():
    spec = FamilySpec(5, 3, F(2, 3))
    assert FamilySpec.from_json(spec.to_json()) == FamilySpec(5, 3, F(2, 3))
