"""Exact arithmetic kernel.

Rationals are plain ``fractions.Fraction`` (always in lowest terms with a
positive denominator, which is exactly the canonical form the rest of the
package relies on).  On top of that this module provides

* ``PolyQ``    -- dense univariate polynomials over Q,
* ``Jet``      -- truncated power series in one variable t with exact
                  rational coefficients (arithmetic is exact mod t^(R+1)),
* ``BigFloat`` -- a value tagged with the decimal precision it was computed
                  at (mpmath-backed; precision is explicit per value, never
                  ambient state).

All values are immutable; every operation returns a fresh value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

Rational = Fraction

#: extra working digits used whenever a BigFloat is produced; digits beyond
#: ``precision`` are never reported.
GUARD_DIGITS = 10


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class NonInvertibleJetError(ZeroDivisionError):
    """Reciprocal of a jet whose constant term is zero."""


class InsufficientPrecisionError(ValueError):
    """A numeric input does not carry enough digits for the request."""


@dataclass(frozen=True)
class PolyQ:
    """Dense polynomial over Q; ``coeffs[i]`` is the coefficient of x^i.

    The zero polynomial is the empty tuple; otherwise the trailing
    coefficient is nonzero, so ``degree == len(coeffs) - 1``.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs=()):
        cs = [_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def const(c) -> "PolyQ":
        return PolyQ([_q(c)])

    @staticmethod
    def x(power: int = 1) -> "PolyQ":
        return PolyQ([0] * power + [1])

    @staticmethod
    def from_roots(roots) -> "PolyQ":
        p = PolyQ([1])
        for r in roots:
            p = p * PolyQ([-_q(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other) -> "PolyQ":
        other = _poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolyQ(out)

    def __neg__(self) -> "PolyQ":
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other) -> "PolyQ":
        return self + (-_poly(other))

    def __mul__(self, other) -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            return PolyQ([c * other for c in self.coeffs])
        other = _poly(other)
        if not self.coeffs or not other.coeffs:
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PolyQ":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = PolyQ([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x) -> Fraction:
        """Exact Horner evaluation."""
        acc = Fraction(0)
        x = _q(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_jet(self, x: "Jet") -> "Jet":
        """Horner evaluation at a jet argument."""
        acc = Jet.constant(0, x.order)
        for c in reversed(self.coeffs):
            acc = acc * x + Jet.constant(c, x.order)
        return acc

    def shift(self, h) -> "PolyQ":
        """p(x + h)."""
        return self.eval_poly(PolyQ([_q(h), 1]))

    def eval_poly(self, inner: "PolyQ") -> "PolyQ":
        acc = PolyQ()
        for c in reversed(self.coeffs):
            acc = acc * inner + PolyQ.const(c)
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        rem = list(self.coeffs)
        d = other.degree
        lc = other.coeffs[-1]
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            f = rem[-1] / lc
            pos = len(rem) - 1 - d
            q[pos] = f
            for i, c in enumerate(other.coeffs):
                rem[pos + i] -= f * c
            rem.pop()
        return PolyQ(q), PolyQ(rem)

    def __floordiv__(self, other: "PolyQ") -> "PolyQ":
        return self.divmod(other)[0]

    def __mod__(self, other: "PolyQ") -> "PolyQ":
        return self.divmod(other)[1]

    def exact_div(self, other: "PolyQ") -> "PolyQ":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "PolyQ":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return PolyQ([c / lc for c in self.coeffs])

    def gcd(self, other: "PolyQ") -> "PolyQ":
        """Monic gcd via the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if self.is_zero():
            return Fraction(1)
        num = math.gcd(*(c.numerator for c in self.coeffs))
        den = math.lcm(*(c.denominator for c in self.coeffs))
        return Fraction(num, den)

    def primitive(self) -> "PolyQ":
        """Integer-coefficient version with content 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        p = self * (1 / self.content())
        if p.coeffs[-1] < 0:
            p = -p
        return p

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*n" if abs(c) != 1 else ("n" if c > 0 else "-n"))
            else:
                parts.append(f"{c}*n^{i}" if abs(c) != 1 else (f"n^{i}" if c > 0 else f"-n^{i}"))
        return " + ".join(parts).replace("+ -", "- ")


def _poly(x) -> PolyQ:
    if isinstance(x, PolyQ):
        return x
    if isinstance(x, (int, Fraction)):
        return PolyQ.const(x)
    raise TypeError(f"cannot coerce {type(x)!r} to PolyQ")


def poly_eval(p: PolyQ, n) -> Fraction:
    return p(n)


def poly_gcd_many(polys) -> PolyQ:
    g = PolyQ()
    for p in polys:
        g = g.gcd(p) if not g.is_zero() else p.monic()
        if g.degree == 0:
            break
    return g


@dataclass(frozen=True)
class Jet:
    """Truncated power series sum(c_m t^m, m = 0..order), exact coefficients."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs, order: int | None = None):
        cs = [_q(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("jet order must be non-negative")
        cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    @staticmethod
    def constant(c, order: int) -> "Jet":
        return Jet([_q(c)], order)

    @staticmethod
    def variable(order: int) -> "Jet":
        """The jet of t itself."""
        return Jet([0, 1], order)

    def _check(self, other: "Jet") -> None:
        if self.order != other.order:
            raise ValueError(
                f"jet order mismatch: {self.order} != {other.order}"
            )

    def __add__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other: "Jet") -> "Jet":
        self._check(other)
        return Jet([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self) -> "Jet":
        return Jet([-a for a in self.coeffs], self.order)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, (int, Fraction)):
            return Jet([c * other for c in self.coeffs], self.order)
        self._check(other)
        out = [Fraction(0)] * (self.order + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.order + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return Jet(out, self.order)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Jet":
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Jet.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> "Jet":
        """Jet b with self*b = 1 mod t^(order+1); requires nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise NonInvertibleJetError("jet has zero constant term")
        inv = [Fraction(1) / c0]
        for m in range(1, self.order + 1):
            s = sum(self.coeffs[j] * inv[m - j] for j in range(1, m + 1))
            inv.append(-s / c0)
        return Jet(inv, self.order)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot extend a jet by truncation")
        return Jet(self.coeffs[: order + 1], order)

    def valuation(self) -> int:
        """Index of the first nonzero coefficient; order+1 if all stored
        coefficients vanish (i.e. valuation exceeds the truncation order)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.order + 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __str__(self) -> str:
        return " + ".join(f"{c}*t^{i}" for i, c in enumerate(self.coeffs))


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_reciprocal(a: Jet) -> Jet:
    return a.reciprocal()


def jet_pochhammer(b: int, m: int, order: int) -> Jet:
    """The rising product prod((b*t + 1 + j), j = 0..m-1) as a jet.

    Constant term is m!.  Negative m is rejected here; callers deal with
    negative rising-factorial lengths before reaching the kernel.
    """
    if m < 0:
        raise ValueError("negative rising-factorial length")
    out = Jet.constant(1, order)
    for j in range(m):
        out = out * Jet([1 + j, b], order)
    return out


@dataclass(frozen=True)
class BigFloat:
    """A numeric value together with the decimal precision it carries.

    ``value`` is an mpmath float computed with at least ``precision`` +
    GUARD_DIGITS working digits; digits past ``precision`` are noise and are
    never printed by :meth:`decimal`.
    """

    value: mpmath.mpf
    precision: int

    @staticmethod
    def from_fraction(q: Fraction, precision: int) -> "BigFloat":
        with mpmath.workdps(precision + GUARD_DIGITS):
            v = mpmath.mpf(q.numerator) / q.denominator
        return BigFloat(v, precision)

    @staticmethod
    def from_mpf(v, precision: int) -> "BigFloat":
        return BigFloat(mpmath.mpf(v), precision)

    @staticmethod
    def from_str(s: str, precision: int) -> "BigFloat":
        with mpmath.workdps(precision + GUARD_DIGITS):
            v = mpmath.mpf(s)
        return BigFloat(v, precision)

    def decimal(self, digits: int | None = None) -> str:
        d = self.precision if digits is None else min(digits, self.precision)
        with mpmath.workdps(self.precision + GUARD_DIGITS):
            return mpmath.nstr(self.value, d, strip_zeros=False)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return self.decimal()
