"""t-adic divisibility of the deformed recurrence right side, and the
limits it produces.

When the base recurrence annihilates the plain row sums, applying it to the
t-deformed row sums leaves a jet C(n; t) whose constant coefficient is
exactly zero.  For power-of-binomial terms much more is true: the first
several coefficients vanish as well (order s+1 for odd s at unit weight,
order s otherwise), so every low-order Taylor coefficient sequence of the
deformed row sums satisfies the very same homogeneous recurrence and its
ratio against the row sums is a fast limit.  This module checks those
valuations exactly, locates the summand maximizer, evaluates the slowly
converging direct limit, and assembles the fast recurrence problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath

from .apery import AperyProblem
from .exact import Jet
from .guess import guess_recurrence
from .hyperterm import (
    ProperTerm,
    franel,
    franel_parameters,
    row_sum,
    row_sum_jet,
)
from .recurrence import Recurrence
from .telescope import OrderExceededError, zeilberger


class RecurrenceMismatchError(ArithmeticError):
    """The recurrence does not annihilate the undeformed row sums."""


class DivisibilityError(ArithmeticError):
    """The right side is not divisible by the power of t the construction needs."""


class BoundaryMaximumError(ArithmeticError):
    """The summand maximizer sits at the boundary of (0, 1)."""


@dataclass(frozen=True)
class DivisibilityReport:
    s: int
    a: Fraction
    jet_order: int
    n_checked: int
    min_valuation: int
    expected: int
    passed: bool

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "a": str(self.a),
            "jet_order": self.jet_order,
            "n_checked": self.n_checked,
            "min_valuation": self.min_valuation,
            "expected": self.expected,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class FamilySpec:
    """Parameters (s, r, a) of one fast/slow limit pair, with the bounds
    s >= 3, 1 <= r <= s-1, a > 0 enforced at construction."""

    s: int
    r: int
    a: Fraction
    alpha: Optional[Union[Fraction, mpmath.mpf]] = None

    def __init__(self, s: int, r: int, a=1, alpha=None):
        if s < 3:
            raise ValueError("power must be at least 3")
        if not 1 <= r <= s - 1:
            raise ValueError(f"coefficient index r={r} outside 1..{s - 1}")
        a = Fraction(a)
        if a <= 0:
            raise ValueError("weight must be positive")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "alpha", alpha)

    def term(self) -> ProperTerm:
        return franel(self.s, self.a)

    def to_json(self) -> dict:
        return {"s": self.s, "r": self.r, "a": str(self.a)}

    @staticmethod
    def from_json(obj: dict) -> "FamilySpec":
        return FamilySpec(int(obj["s"]), int(obj["r"]), Fraction(obj["a"]))


def expected_valuation(s: int, a) -> int:
    """Guaranteed divisibility order of the right side: s+1 for odd s at
    unit weight, s otherwise."""
    if Fraction(a) == 1 and s % 2 == 1:
        return s + 1
    return s


def rhs_jet(term: ProperTerm, rec: Recurrence, n: int, order: int) -> Jet:
    """The jet of the right side C(n; t) = sum(p_i(n) * deformed row sum at
    n+i); its constant coefficient must vanish exactly."""
    acc = Jet.constant(0, order)
    for i, p in enumerate(rec.coeffs):
        c = p(n)
        if c:
            acc = acc + row_sum_jet(term, n + i, order) * c
    if acc.coeffs[0] != 0:
        raise RecurrenceMismatchError(
            f"recurrence does not annihilate the row sums at n = {n}"
        )
    return acc


def valuation_check(
    term: ProperTerm,
    rec: Recurrence,
    n_max: int,
    order: int | None = None,
) -> DivisibilityReport:
    """Minimum t-adic valuation of the right side over 0 <= n <= n_max.

    The jet order defaults to s+2, one margin coefficient above the claimed
    valuation, so a reported "passed" distinguishes genuine divisibility
    from everything vanishing by truncation.
    """
    s, a = franel_parameters(term)
    expected = expected_valuation(s, a)
    if order is None:
        order = s + 2
    if order < expected + 1:
        raise ValueError(f"jet order {order} cannot certify valuation {expected}")
    min_val = order + 1
    for n in range(n_max + 1):
        min_val = min(min_val, rhs_jet(term, rec, n, order).valuation())
        if min_val < expected:
            break
    return DivisibilityReport(
        s=s,
        a=a,
        jet_order=order,
        n_checked=n_max,
        min_valuation=min_val,
        expected=expected,
        passed=min_val >= expected,
    )


def _exact_root(value: Fraction, power: int) -> Optional[Fraction]:
    """value**(1/power) when it is rational, else None."""
    num = round(value.numerator ** (1 / power))
    den = round(value.denominator ** (1 / power))
    for nn in (num - 1, num, num + 1):
        for dd in (den - 1, den, den + 1):
            if nn > 0 and dd > 0 and Fraction(nn**power, dd**power) == value:
                return Fraction(nn, dd)
    return None


def find_alpha(term: ProperTerm, digits: int = 30):
    """The location of the summand maximizer: the root of the limiting
    log-ratio of consecutive summands along k = alpha*n.

    Returns an exact Fraction when the root is rational (power-of-binomial
    terms with an s-th-power weight), otherwise an mpmath value carrying
    ``digits`` digits.
    """
    try:
        s, a = franel_parameters(term)
    except ValueError:
        s = a = None
    if s is not None:
        root = _exact_root(1 / a, s)
        if root is not None:
            return Fraction(1, 1) / (1 + root)

    pieces = []  # (coefficient on log, affine poly c0 + c1*alpha)
    for (ai, bi, _c) in term.num_factors:
        if bi:
            pieces.append((bi, (ai, bi)))
    for (ui, vi, _w) in term.den_factors:
        if vi:
            pieces.append((-vi, (ui, vi)))

    def rho(alpha):
        acc = mpmath.log(term.weight.numerator) - mpmath.log(term.weight.denominator)
        for w, (c0, c1) in pieces:
            arg = c0 + c1 * alpha
            if arg <= 0:
                return None
            acc += w * mpmath.log(arg)
        return acc

    with mpmath.workdps(digits + 15):
        grid = 400
        lo = hi = None
        prev_alpha = prev_val = None
        for i in range(1, grid):
            alpha = mpmath.mpf(i) / grid
            val = rho(alpha)
            if val is None:
                prev_alpha = prev_val = None
                continue
            if val == 0:
                return +alpha
            if prev_val is not None and prev_val > 0 > val:
                lo, hi = prev_alpha, alpha
                break
            prev_alpha, prev_val = alpha, val
        if lo is None:
            raise BoundaryMaximumError("no interior sign change of the log-ratio")
        target = mpmath.mpf(10) ** (-(digits + 5))
        while hi - lo > target:
            mid = (lo + hi) / 2
            v = rho(mid)
            if v is None or v < 0:
                hi = mid
            else:
                lo = mid
        return +((lo + hi) / 2)


class _PowerSums:
    """Partial sums sum(1/j^i, j <= m) for i = 1..max_power, maintained over
    the common denominator lcm(1..m) so no per-step gcd normalization of big
    rationals is needed."""

    def __init__(self, max_power: int):
        self.max_power = max_power
        self.den = 1
        self.den_pows = [1] * (max_power + 1)  # den_pows[i] = den**i
        self.nums = [0] * (max_power + 1)  # nums[i]/den**i = sum 1/j^i
        self.m = 0

    def advance(self) -> None:
        j = self.m + 1
        g = math.gcd(self.den, j)
        if g != j:
            f = j // g
            self.den *= f
            fp = 1
            for i in range(1, self.max_power + 1):
                fp *= f
                self.den_pows[i] *= fp
                self.nums[i] *= fp
        jp = 1
        for i in range(1, self.max_power + 1):
            jp *= j
            self.nums[i] += self.den_pows[i] // jp
        self.m = j

    def snapshot(self) -> list[Fraction]:
        """[p_1, ..., p_max] at the current m, as exact rationals."""
        return [
            Fraction(self.nums[i], self.den_pows[i])
            for i in range(1, self.max_power + 1)
        ]


def _elementary_from_power_sums(power_sums: list[Fraction], upto: int) -> list[Fraction]:
    """Newton's identities: e_0..e_upto from p_1..p_upto."""
    e = [Fraction(1)] + [Fraction(0)] * upto
    for m in range(1, upto + 1):
        acc = Fraction(0)
        sign = 1
        for i in range(1, m + 1):
            acc += sign * e[m - i] * power_sums[i - 1]
            sign = -sign
        e[m] = acc / m
    return e


def normalized_coeff_fast(s: int, r: int, n: int, k: int) -> Fraction:
    """coeff_c for the power-of-binomial summand, via incremental harmonic
    power sums instead of length-k rising products (usable at n ~ 10^5)."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if r == 0:
        return Fraction(1)
    lo, hi = sorted((k, n - k))
    ps = _PowerSums(r)
    while ps.m < lo:
        ps.advance()
    sums_lo = ps.snapshot()
    while ps.m < hi:
        ps.advance()
    sums_hi = ps.snapshot()
    sums_k, sums_nk = (sums_lo, sums_hi) if k == lo else (sums_hi, sums_lo)

    e_k = _elementary_from_power_sums(sums_k, r)
    e_nk = _elementary_from_power_sums([(-1) ** i * v for i, v in enumerate(sums_nk, start=1)], r)
    prod = Jet(e_k, r) * Jet(e_nk, r)  # ((1+t)_k / k!) * ((1-t)_{n-k} / (n-k)!)
    return (prod.reciprocal() ** s).coeffs[r]


def _floor_multiple(alpha, n: int) -> int:
    """floor(alpha * n) with an exactness guard for numeric alpha."""
    if isinstance(alpha, Fraction):
        return math.floor(alpha * n)
    with mpmath.workdps(40):
        x = alpha * n
        frac = x - mpmath.floor(x)
        if frac < mpmath.mpf(10) ** -20 or 1 - frac < mpmath.mpf(10) ** -20:
            raise ValueError(
                f"alpha*n is within 1e-20 of an integer at n={n}; "
                "raise the alpha precision to disambiguate the floor"
            )
        return int(mpmath.floor(x))


def spec_alpha(spec: FamilySpec):
    return spec.alpha if spec.alpha is not None else find_alpha(spec.term())


def slow_oracle(spec: FamilySpec, n: int) -> Fraction:
    """The direct, O(1/n)-converging value: the r-th normalized coefficient
    at k = floor(alpha*n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    alpha = spec_alpha(spec)
    k = _floor_multiple(alpha, n)
    return normalized_coeff_fast(spec.s, spec.r, n, k)


def coefficient_sequence(term: ProperTerm, r: int, count: int) -> list[Fraction]:
    """The t^r Taylor coefficients of the deformed row sums, n = 0..count-1."""
    return [row_sum_jet(term, n, r).coeffs[r] for n in range(count)]


def term_recurrence(term: ProperTerm, max_order: int = 6) -> Recurrence:
    """Annihilating recurrence for the row sums: creative telescoping first,
    exact guessing as the fallback."""
    try:
        rec, _cert = zeilberger(term, max_order=max_order)
        return rec
    except OrderExceededError:
        seq = [row_sum(term, n) for n in range(60)]
        rec = guess_recurrence(seq, max_order=max_order, max_degree=8)
        if rec is None:
            raise
        return rec


def initial_data(term: ProperTerm, rec: Recurrence, r: int) -> AperyProblem:
    """The fast problem: B starts from plain row sums, A from the t^r
    coefficients of the deformed row sums (r = 0 degenerates to A = B)."""
    init_b = [row_sum(term, n) for n in range(rec.order)]
    init_a = coefficient_sequence(term, r, rec.order)
    return AperyProblem(rec, init_a=init_a, init_b=init_b)


def build_problem(
    spec: FamilySpec,
    rec: Recurrence | None = None,
    check_n_max: int = 20,
) -> AperyProblem:
    """Assemble the fast limit problem for (s, r, a), re-verifying the
    divisibility that makes the A side satisfy the homogeneous recurrence.

    The divisibility for non-unit weights is an empirical regularity, not a
    proved theorem, so it is always re-checked rather than trusted.
    """
    term = spec.term()
    if rec is None:
        rec = term_recurrence(term)
    report = valuation_check(term, rec, check_n_max, order=max(spec.s + 2, spec.r + 2))
    if not report.passed or report.min_valuation <= spec.r:
        raise DivisibilityError(
            f"right side valuation {report.min_valuation} does not clear r={spec.r}"
        )
    return initial_data(term, rec, spec.r)
