"""Running recurrences exactly and estimating limits of solution ratios.

Two solutions A, B of the same recurrence with different initial data often
have A(n)/B(n) converging geometrically; this module runs such problems in
exact rational arithmetic, reports the limit at an explicit decimal
precision together with decay diagnostics, and estimates the
denominator-cleared error exponent that irrationality arguments care about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import mpmath

from .exact import GUARD_DIGITS, BigFloat, InsufficientPrecisionError, PolyQ
from .recurrence import NeedsMoreTermsError, Recurrence


class SingularRecurrenceError(ArithmeticError):
    """Leading coefficient vanished at some evaluation point."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"leading coefficient vanishes at n = {n}")


@dataclass(frozen=True)
class RightSide:
    """A P-recursive right side: its own homogeneous recurrence plus initial data."""

    rec: Recurrence
    init: tuple[Fraction, ...]

    def __init__(self, rec: Recurrence, init):
        object.__setattr__(self, "rec", rec)
        object.__setattr__(self, "init", tuple(Fraction(v) for v in init))

    def to_json(self) -> dict:
        return {"rec": self.rec.to_json(), "initC": [str(v) for v in self.init]}

    @staticmethod
    def from_json(obj: dict) -> "RightSide":
        return RightSide(Recurrence.from_json(obj["rec"]), [Fraction(v) for v in obj["initC"]])


@dataclass(frozen=True)
class AperyProblem:
    """One recurrence, two initial-condition vectors; the A side may carry an
    inhomogeneous right side (the B side is always homogeneous)."""

    rec: Recurrence
    init_a: tuple[Fraction, ...]
    init_b: tuple[Fraction, ...]
    rhs: Optional[RightSide] = None

    def __init__(self, rec, init_a, init_b, rhs=None):
        object.__setattr__(self, "rec", rec)
        object.__setattr__(self, "init_a", tuple(Fraction(v) for v in init_a))
        object.__setattr__(self, "init_b", tuple(Fraction(v) for v in init_b))
        object.__setattr__(self, "rhs", rhs)
        if len(self.init_a) != rec.order or len(self.init_b) != rec.order:
            raise ValueError("initial data length must equal the recurrence order")

    def to_json(self) -> dict:
        out = {
            "rec": self.rec.to_json(),
            "initA": [str(v) for v in self.init_a],
            "initB": [str(v) for v in self.init_b],
        }
        if self.rhs is not None:
            out["rhs"] = self.rhs.to_json()
        return out

    @staticmethod
    def from_json(obj: dict) -> "AperyProblem":
        rhs = RightSide.from_json(obj["rhs"]) if obj.get("rhs") else None
        return AperyProblem(
            Recurrence.from_json(obj["rec"]),
            [Fraction(v) for v in obj["initA"]],
            [Fraction(v) for v in obj["initB"]],
            rhs,
        )


@dataclass(frozen=True)
class LimitReport:
    n_used: int
    limit: BigFloat
    alpha_estimate: Optional[BigFloat]
    delta_estimate: Optional[BigFloat]
    digits_stable: int
    diagnosis: str  # "exponential" | "slow" | "non-convergent" | "no iterations"


def iter_rec(
    rec: Recurrence,
    init,
    rhs: Iterator[Fraction] | None = None,
) -> Iterator[Fraction]:
    """Yield X(0), X(1), ... forever, keeping only a sliding window of values."""
    L = rec.order
    window = [Fraction(v) for v in init]
    if len(window) != L:
        raise ValueError("initial data length must equal the recurrence order")
    yield from window
    n = 0
    while True:
        lead = rec.coeffs[L](n)
        if lead == 0:
            raise SingularRecurrenceError(n)
        acc = sum(
            (rec.coeffs[i](n) * window[i] for i in range(L)),
            Fraction(0),
        )
        c_n = next(rhs) if rhs is not None else Fraction(0)
        nxt = (c_n - acc) / lead
        yield nxt
        window = window[1:] + [nxt]
        n += 1


def rec_run(rec: Recurrence, init, n_max: int) -> list[Fraction]:
    """Exact values X(0..n_max) of the homogeneous problem."""
    out = []
    for v in iter_rec(rec, init):
        out.append(v)
        if len(out) > n_max:
            return out[: n_max + 1]
    return out


def rec_run_inhom(rec: Recurrence, init, rhs_values, n_max: int) -> list[Fraction]:
    """Exact values X(0..n_max) with sum(p_i(n) X(n+i)) = rhs_values[n]."""
    need = n_max - rec.order + 1
    if need > 0 and len(rhs_values) < need:
        raise NeedsMoreTermsError(need, f"right side needs {need} terms, got {len(rhs_values)}")
    out = []
    for v in iter_rec(rec, init, iter(Fraction(v) for v in rhs_values)):
        out.append(v)
        if len(out) > n_max:
            return out[: n_max + 1]
    return out


def _log10(x: Fraction, dps: int) -> mpmath.mpf:
    with mpmath.workdps(dps):
        return mpmath.log10(mpmath.mpf(x.numerator)) - mpmath.log10(mpmath.mpf(x.denominator))


def limit_report(problem: AperyProblem, n_max: int, precision: int) -> LimitReport:
    """Run the problem to n_max and report A(N)/B(N) at the stated precision.

    digits_stable counts the agreement between the estimates at N and N/2;
    the decay base is a least-squares fit of the log-error over the last
    quarter of the indices (an estimate, not a certified bound).
    """
    rec = problem.rec
    bs = rec_run(rec, problem.init_b, n_max)
    if problem.rhs is not None:
        cs = rec_run(problem.rhs.rec, problem.rhs.init, max(0, n_max - rec.order))
        as_ = rec_run_inhom(rec, problem.init_a, cs, n_max)
    else:
        as_ = rec_run(rec, problem.init_a, n_max)

    zero_run = 0
    for b in bs:
        if b == 0:
            zero_run += 1
            if zero_run >= 3:
                return LimitReport(
                    n_max,
                    BigFloat.from_fraction(Fraction(0), precision),
                    None,
                    None,
                    0,
                    "non-convergent",
                )
        else:
            zero_run = 0

    n_ref = n_max
    while n_ref > 0 and bs[n_ref] == 0:
        n_ref -= 1
    if n_ref == 0 and bs[0] == 0:
        raise ZeroDivisionError("B vanishes on the whole range")
    r_ref = as_[n_ref] / bs[n_ref]
    limit = BigFloat.from_fraction(r_ref, precision)

    if n_ref == 0:
        return LimitReport(0, limit, None, None, 0, "no iterations")

    cap = max(0, precision - GUARD_DIGITS)

    def digits_against_ref(n: int) -> tuple[int, bool] | None:
        while n > 0 and bs[n] == 0:
            n -= 1
        if bs[n] == 0:
            return None
        diff = abs(as_[n] / bs[n] - r_ref)
        if diff == 0:
            return cap, True
        return max(0, int(mpmath.floor(-_log10(diff, 30)))), False

    half = digits_against_ref(n_ref // 2)
    quarter = digits_against_ref(n_ref // 4)
    half_digits = half[0] if half else None
    quarter_digits = quarter[0] if quarter else None
    digits = min(half_digits, cap) if half_digits is not None else 0

    start = max(0, n_ref - max(4, n_ref // 4))
    points = []
    for n in range(start, n_ref):
        if bs[n] == 0:
            continue
        err = abs(as_[n] / bs[n] - r_ref)
        if err == 0:
            continue
        points.append((n, _log10(err, 40)))
    alpha = None
    if len(points) >= 3:
        with mpmath.workdps(40):
            xs = [mpmath.mpf(n) for n, _ in points]
            ys = [y for _, y in points]
            xbar = sum(xs) / len(xs)
            ybar = sum(ys) / len(ys)
            denom = sum((x - xbar) ** 2 for x in xs)
            if denom > 0:
                slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / denom
                alpha = BigFloat.from_mpf(mpmath.power(10, -slope), min(precision, 15))

    # geometric decay doubles the agreed digits when the index doubles;
    # polynomial decay only adds a constant
    if half is not None and quarter is not None and half[1] and quarter[1]:
        diagnosis = "exact"
    elif digits <= 0:
        diagnosis = "non-convergent"
    elif (
        half_digits is not None
        and quarter_digits is not None
        and half_digits >= quarter_digits + max(2, quarter_digits // 4)
        and (alpha is None or alpha.value > 1)
    ):
        diagnosis = "exponential"
    else:
        diagnosis = "slow"
    return LimitReport(n_ref, limit, alpha, None, digits, diagnosis)


class ClearingFactorError(ValueError):
    """Multiplying by the clearing sequence did not produce integers."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"clearing factor insufficient at n = {n}")


def clearing_lcm_power(count: int, multiplier: int = 1, exponent: int = 1) -> list[int]:
    """The sequence n -> multiplier * lcm(1..n)^exponent for n = 0..count-1."""
    out = []
    lcm = 1
    for n in range(count):
        if n >= 1:
            lcm = math.lcm(lcm, n)
        out.append(multiplier * lcm**exponent)
    return out


def delta_estimate(
    a_seq,
    b_seq,
    limit: BigFloat,
    clearing,
) -> list[Optional[BigFloat]]:
    """Error exponents delta_n = -1 - log|a'/b' - limit| / log b' after
    clearing denominators (a' = A*clearing, b' = B*clearing, both integral).

    Entry n is None where the exponent is undefined (b' in {-1, 0, 1} or an
    exactly zero error).  Raises ClearingFactorError if clearing does not
    make the values integral, and InsufficientPrecisionError when the limit
    carries too few digits to resolve the error at some n.
    """
    m = min(len(a_seq), len(b_seq), len(clearing))
    a_int, b_int = [], []
    for n in range(m):
        ap = Fraction(a_seq[n]) * clearing[n]
        bp = Fraction(b_seq[n]) * clearing[n]
        if ap.denominator != 1 or bp.denominator != 1:
            raise ClearingFactorError(n)
        a_int.append(ap.numerator)
        b_int.append(bp.numerator)

    dps = limit.precision + GUARD_DIGITS
    out: list[Optional[BigFloat]] = []
    with mpmath.workdps(dps):
        lim = +limit.value
        for n in range(m):
            if abs(b_int[n]) <= 1:
                out.append(None)
                continue
            diff = abs(mpmath.mpf(a_int[n]) / b_int[n] - lim)
            if diff == 0:
                out.append(None)
                continue
            if diff < mpmath.mpf(10) ** (-(limit.precision - 5)):
                needed = int(-mpmath.log10(diff)) + 20
                raise InsufficientPrecisionError(
                    f"limit needs about {needed} digits to resolve the error at n = {n}"
                )
            delta = -1 - mpmath.log(diff) / mpmath.log(abs(b_int[n]))
            out.append(BigFloat.from_mpf(delta, min(limit.precision, 15)))
    return out


def operator_compose(outer: Recurrence, inner: Recurrence) -> Recurrence:
    """The shift-operator product outer(S) o inner(S).

    If inner annihilates X up to a right side C and outer annihilates C,
    the composition annihilates X outright; its order is the sum of the
    orders.
    """
    lo, li = outer.order, inner.order
    out = [PolyQ() for _ in range(lo + li + 1)]
    for j, q in enumerate(outer.coeffs):
        if q.is_zero():
            continue
        for i, p in enumerate(inner.coeffs):
            if p.is_zero():
                continue
            out[i + j] = out[i + j] + q * p.shift(j)
    return Recurrence(out)


def zeta3_problem() -> AperyProblem:
    """The classical order-2 benchmark: (n+1)^3 X(n) - (2n+3)(17n^2+51n+39) X(n+1)
    + (n+2)^3 X(n+2) = 0 with initial data (0, 6) and (1, 5)."""
    p0 = PolyQ([1, 3, 3, 1])
    p1 = -(PolyQ([3, 2]) * PolyQ([39, 51, 17]))
    p2 = PolyQ([8, 12, 6, 1])
    rec = Recurrence([p0, p1, p2])
    return AperyProblem(rec, init_a=[0, 6], init_b=[1, 5])
