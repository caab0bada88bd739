"""Linear recurrences with polynomial coefficients.

A recurrence of order L is sum(p_i(n) * X(n+i), i = 0..L) = rhs, stored as
the coefficient polynomials p_0..p_L in canonical form: no common polynomial
factor, integer coefficients with content 1, and a positive leading
coefficient on p_L.  ``rhs_kind`` records what the right side is:

* ``"zero"``      -- homogeneous,
* ``"boundary"``  -- the telescoped boundary difference of a certificate,
* ``"seq"``       -- an externally supplied P-recursive sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import PolyQ, poly_gcd_many

RHS_KINDS = ("zero", "boundary", "seq")


class NeedsMoreTermsError(ValueError):
    """A sequence prefix is too short for the requested operation."""

    def __init__(self, required: int, message: str | None = None):
        self.required = required
        super().__init__(message or f"need at least {required} terms")


@dataclass(frozen=True)
class Recurrence:
    coeffs: tuple[PolyQ, ...]
    rhs_kind: str = "zero"

    def __init__(self, coeffs, rhs_kind: str = "zero"):
        cs = tuple(c if isinstance(c, PolyQ) else PolyQ(c) for c in coeffs)
        if not cs or cs[-1].is_zero():
            raise ValueError("leading recurrence coefficient must be nonzero")
        if rhs_kind not in RHS_KINDS:
            raise ValueError(f"unknown rhs kind {rhs_kind!r}")
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "rhs_kind", rhs_kind)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def apply(self, seq, n: int) -> Fraction:
        """sum(p_i(n) * seq[n+i])."""
        return sum(
            (p(n) * seq[n + i] for i, p in enumerate(self.coeffs)),
            Fraction(0),
        )

    def normalized(self) -> "Recurrence":
        cs = list(self.coeffs)
        g = poly_gcd_many([c for c in cs if not c.is_zero()])
        if g.degree > 0:
            cs = [c.exact_div(g) if not c.is_zero() else c for c in cs]
        den = math.lcm(*(c.denominator for p in cs for c in p.coeffs)) if cs else 1
        cs = [p * den for p in cs]
        content = math.gcd(*(abs(c.numerator) for p in cs for c in p.coeffs))
        if content > 1:
            cs = [p * Fraction(1, content) for p in cs]
        if cs[-1].coeffs[-1] < 0:
            cs = [-p for p in cs]
        return Recurrence(cs, self.rhs_kind)

    def to_json(self) -> dict:
        norm = self.normalized()
        return {
            "order": norm.order,
            "coeffs": [[int(c) for c in p.coeffs] for p in norm.coeffs],
            "rhs": norm.rhs_kind,
        }

    @staticmethod
    def from_json(obj: dict) -> "Recurrence":
        coeffs = [PolyQ([Fraction(c) for c in row]) for row in obj["coeffs"]]
        return Recurrence(coeffs, obj.get("rhs", "zero"))

    def __str__(self) -> str:
        pieces = []
        for i, p in enumerate(self.coeffs):
            if p.is_zero():
                continue
            shift = "X(n)" if i == 0 else f"X(n+{i})"
            pieces.append(f"({p})*{shift}")
        rhs = {"zero": "0", "boundary": "boundary(n)", "seq": "C(n)"}[self.rhs_kind]
        return " + ".join(pieces) + f" = {rhs}"
