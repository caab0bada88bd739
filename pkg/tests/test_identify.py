from fractions import Fraction

import mpmath
import pytest

from aperylimits.exact import BigFloat, InsufficientPrecisionError
from aperylimits.identify import (
    DEFAULT_BASIS,
    ConstantMatch,
    UnknownConstantError,
    constant,
    identify,
    integer_relation,
    lll_reduce,
    resolve_basis,
)

F = Fraction


def test_constant_values_against_mpmath():
    refs = {
        "pi": lambda: +mpmath.pi,
        "zeta2": lambda: mpmath.zeta(2),
        "zeta3": lambda: mpmath.zeta(3),
        "zeta5": lambda: mpmath.zeta(5),
        "log2": lambda: mpmath.log(2),
        "catalan": lambda: +mpmath.catalan,
        "gamma": lambda: +mpmath.euler,
    }
    with mpmath.workdps(80):
        for name, ref in refs.items():
            got = constant(name, 60)
            assert abs(got.value - ref()) < mpmath.mpf(10) ** -59, name


def test_constant_known_prefixes():
    assert constant("zeta3", 20).decimal().startswith("1.2020569031595942854")
    assert constant("zeta2", 20).decimal().startswith("1.644934066848226436")
    assert constant("log2", 5).decimal().startswith("0.69315")


def test_constant_reproducible_when_precision_grows():
    lo = constant("catalan", 30)
    hi = constant("catalan", 90)
    with mpmath.workdps(100):
        assert abs(lo.value - hi.value) < mpmath.mpf(10) ** -29


def test_constant_unknown_name():
    with pytest.raises(UnknownConstantError):
        constant("feigenbaum", 30)


def test_lll_finds_short_vector():
    # planted relation 2x - 3y + z = 0 in a scaled lattice
    rows = [[1, 0, 0, 2 * 10**12], [0, 1, 0, -3 * 10**12], [0, 0, 1, 10**12 * 1]]
    reduced = lll_reduce(rows)
    assert any(max(map(abs, v)) <= 3 for v in reduced)


def test_integer_relation_examples():
    one = BigFloat.from_fraction(F(1), 40)
    half = BigFloat.from_fraction(F(1, 2), 40)
    assert integer_relation([one, half], 40) in ([1, -2], [-1, 2])

    pi2, z2 = resolve_basis(["pi^2", "zeta2"], 45)
    rel = integer_relation([pi2, z2], 40)
    assert rel in ([1, -6], [-1, 6])

    with mpmath.workdps(60):
        e = BigFloat.from_mpf(+mpmath.e, 50)
    assert integer_relation([one, e], 40) is None


def test_integer_relation_precision_guards():
    one = BigFloat.from_fraction(F(1), 40)
    with pytest.raises(InsufficientPrecisionError):
        integer_relation([one, one], 10)
    weak = BigFloat.from_fraction(F(1, 3), 25)
    with pytest.raises(InsufficientPrecisionError):
        integer_relation([one, weak], 40)


def test_identify_zeta3():
    match = identify(constant("zeta3", 80), ["1", "zeta3"], 40)
    assert match is not None
    m = match.coefficients
    assert m[0] * 1 + m[2] * 1 == 0 and m[1] == 0  # value = zeta3
    assert match.confidence_digits >= 40


def test_identify_rational():
    match = identify(BigFloat.from_fraction(F(3, 4), 40), ["1"], 40)
    assert match is not None
    assert match.coefficients in ((4, -3), (-4, 3))


def test_identify_skips_internal_basis_relations():
    # pi^2 = 6 zeta2 lives inside the default basis; the target relation
    # must still be found
    match = identify(constant("zeta3", 90), DEFAULT_BASIS, 40)
    assert match is not None
    assert match.coefficients[0] != 0
    with mpmath.workdps(50):
        implied = match.implied_value(40)
        assert abs(implied.value - mpmath.zeta(3)) < mpmath.mpf(10) ** -38


def test_identify_withdraws_near_misses():
    with mpmath.workdps(90):
        off = BigFloat.from_mpf(
            constant("zeta3", 80).value + mpmath.mpf(10) ** -22, 60
        )
    assert identify(off, ["1", "zeta3"], 20) is None


def test_identify_accepts_target_limited_precision():
    # the target itself only carries 40 digits: the residual cannot shrink
    # below that floor, which must not count as a withdrawal
    value = BigFloat.from_str("0.6931471805599453094172321214581765680755", 40)
    match = identify(value, ["1", "log2"], 30)
    assert match is not None
    assert match.coefficients in ((1, 0, -1), (-1, 0, 1))


def test_identify_no_relation():
    with mpmath.workdps(70):
        e = BigFloat.from_mpf(+mpmath.e, 60)
    assert identify(e, ["1", "zeta3"], 40) is None


def test_identify_scale_coherent():
    base = identify(constant("zeta3", 80), ["1", "zeta3"], 40)
    with mpmath.workdps(90):
        doubled_value = BigFloat.from_mpf(2 * constant("zeta3", 80).value, 70)
    doubled = identify(doubled_value, ["1", "zeta3"], 40)
    assert doubled is not None
    with mpmath.workdps(60):
        assert abs(doubled.implied_value(40).value - 2 * base.implied_value(40).value) < mpmath.mpf(10) ** -35


def test_identify_deterministic():
    a = identify(constant("zeta2", 60), ["1", "zeta2"], 40)
    b = identify(constant("zeta2", 60), ["1", "zeta2"], 40)
    assert a == b


def test_match_json_roundtrip():
    match = identify(constant("zeta2", 60), ["1", "zeta2"], 40)
    again = ConstantMatch.from_json(match.to_json())
    assert again.basis == match.basis
    assert again.coefficients == match.coefficients
