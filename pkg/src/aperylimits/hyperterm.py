"""Proper hypergeometric terms and their t-deformation.

A term is

    F(n, k) = P(n, k) * prod((a_i*n + b_i*k + c_i)!) / prod((u_i*n + v_i*k + w_i)!) * x^k

with integer triples and a rational geometric weight x.  Next to plain exact
evaluation, the module evaluates the *t-deformed* summand

    F^(n, k; t) = P(n, k+t) * prod((b_i*t + 1)_{a_i*n + b_i*k + c_i})
                            / prod((v_i*t + 1)_{u_i*n + v_i*k + w_i}) * x^k

as a :class:`~aperylimits.exact.Jet` (each factorial m! becomes the rising
product (b*t+1)_m, so setting t = 0 recovers F itself), and extracts the
Taylor coefficients of the summand-normalized deformation, the quantities
whose weighted binomial averages the rest of the package turns into fast
limits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Jet, PolyQ, jet_pochhammer

Triple = tuple[int, int, int]


class UndefinedTermError(ArithmeticError):
    """Numerator factorial has a negative argument (and no denominator does),
    or a deformed evaluation was requested outside the term's support."""


class UndefinedCoefficientError(ArithmeticError):
    """Normalized deformation coefficient requested where the summand is zero."""


@dataclass(frozen=True)
class Poly2:
    """Bivariate polynomial P(n, k); ``rows[i]`` is the PolyQ in k multiplying n^i."""

    rows: tuple[PolyQ, ...]

    def __init__(self, rows=()):
        rs = [r if isinstance(r, PolyQ) else PolyQ(r) for r in rows]
        while rs and rs[-1].is_zero():
            rs.pop()
        object.__setattr__(self, "rows", tuple(rs))

    @staticmethod
    def const(c) -> "Poly2":
        return Poly2([PolyQ([c])])

    @staticmethod
    def one() -> "Poly2":
        return Poly2([PolyQ([1])])

    def is_one(self) -> bool:
        return len(self.rows) == 1 and self.rows[0].coeffs == (Fraction(1),)

    def is_zero(self) -> bool:
        return not self.rows

    def at_n(self, n) -> PolyQ:
        """Partial evaluation: the univariate polynomial k -> P(n, k)."""
        acc = PolyQ()
        for row in reversed(self.rows):
            acc = acc * n + row
        return acc

    def __call__(self, n, k) -> Fraction:
        return self.at_n(Fraction(n))(k)

    def eval_k_jet(self, n, k, order: int) -> Jet:
        """Jet of P(n, k + t)."""
        return self.at_n(Fraction(n)).eval_jet(Jet([k, 1], order))

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in row.coeffs] for row in self.rows]

    @staticmethod
    def from_json(grid) -> "Poly2":
        return Poly2([PolyQ([Fraction(c) for c in row]) for row in grid])


@dataclass(frozen=True)
class ProperTerm:
    """The data of a proper hypergeometric term; immutable and hashable."""

    poly: Poly2
    num_factors: tuple[Triple, ...]
    den_factors: tuple[Triple, ...]
    weight: Fraction

    def __init__(self, poly=None, num_factors=(), den_factors=(), weight=1):
        object.__setattr__(self, "poly", poly if poly is not None else Poly2.one())
        object.__setattr__(self, "num_factors", tuple(tuple(t) for t in num_factors))
        object.__setattr__(self, "den_factors", tuple(tuple(t) for t in den_factors))
        w = Fraction(weight)
        if w == 0:
            raise ValueError("geometric weight must be nonzero")
        object.__setattr__(self, "weight", w)

    def to_json(self) -> dict:
        return {
            "P": self.poly.to_json(),
            "num": [list(t) for t in self.num_factors],
            "den": [list(t) for t in self.den_factors],
            "x": str(self.weight),
        }

    @staticmethod
    def from_json(obj: dict) -> "ProperTerm":
        return ProperTerm(
            poly=Poly2.from_json(obj.get("P", [["1"]])),
            num_factors=[tuple(t) for t in obj.get("num", [])],
            den_factors=[tuple(t) for t in obj.get("den", [])],
            weight=Fraction(obj.get("x", "1")),
        )


def franel(s: int, a=1) -> ProperTerm:
    """The s-th power binomial summand C(n,k)^s * a^k."""
    if s < 1:
        raise ValueError("power must be a positive integer")
    return ProperTerm(
        num_factors=[(1, 0, 0)] * s,
        den_factors=[(0, 1, 0)] * s + [(1, -1, 0)] * s,
        weight=a,
    )


def franel_parameters(term: ProperTerm) -> tuple[int, Fraction]:
    """Recover (s, a) from a term of the :func:`franel` shape."""
    s = len(term.num_factors)
    if (
        s >= 1
        and term.poly.is_one()
        and term.num_factors == ((1, 0, 0),) * s
        and term.den_factors == ((0, 1, 0),) * s + ((1, -1, 0),) * s
    ):
        return s, term.weight
    raise ValueError("term is not a power-of-binomial summand")


_FACTORIALS: list[int] = [1]


def _factorial(m: int) -> int:
    while len(_FACTORIALS) <= m:
        _FACTORIALS.append(_FACTORIALS[-1] * len(_FACTORIALS))
    return _FACTORIALS[m]


@dataclass(frozen=True)
class TermValue:
    """Evaluation result carrying the zero-by-support flag."""

    value: Fraction
    zero_by_support: bool


def term_value(term: ProperTerm, n: int, k: int) -> TermValue:
    if n < 0:
        raise ValueError("row index must be non-negative")
    den_args = [u * n + v * k + w for (u, v, w) in term.den_factors]
    if any(m < 0 for m in den_args):
        return TermValue(Fraction(0), True)
    num_args = [a * n + b * k + c for (a, b, c) in term.num_factors]
    if any(m < 0 for m in num_args):
        raise UndefinedTermError(
            f"numerator factorial argument negative at (n={n}, k={k})"
        )
    num = 1
    for m in num_args:
        num *= _factorial(m)
    den = 1
    for m in den_args:
        den *= _factorial(m)
    val = term.poly(n, k) * Fraction(num, den) * term.weight**k
    return TermValue(val, False)


def term_eval(term: ProperTerm, n: int, k: int) -> Fraction:
    """Exact value of F(n, k); zero when a denominator factorial argument is
    negative (the usual binomial-sum support convention)."""
    return term_value(term, n, k).value


def term_jet(term: ProperTerm, n: int, k: int, order: int) -> Jet:
    """Jet of the t-deformed summand F^(n, k; t) to the given order.

    Unlike :func:`term_eval` there is no zero-by-support convention here: a
    rising product of negative length is undefined, so any negative factorial
    argument raises.
    """
    if n < 0:
        raise ValueError("row index must be non-negative")
    out = term.poly.eval_k_jet(n, k, order) if not term.poly.is_one() else Jet.constant(1, order)
    for (a, b, c) in term.num_factors:
        m = a * n + b * k + c
        if m < 0:
            raise UndefinedTermError(
                f"deformed term undefined: rising product of length {m} at (n={n}, k={k})"
            )
        out = out * jet_pochhammer(b, m, order)
    den = Jet.constant(1, order)
    for (u, v, w) in term.den_factors:
        m = u * n + v * k + w
        if m < 0:
            raise UndefinedTermError(
                f"deformed term undefined: rising product of length {m} at (n={n}, k={k})"
            )
        den = den * jet_pochhammer(v, m, order)
    return out * den.reciprocal() * term.weight**k


def row_sum(term: ProperTerm, n: int) -> Fraction:
    """sum(F(n, k), k = 0..n), exact."""
    return sum((term_eval(term, n, k) for k in range(n + 1)), Fraction(0))


_ROW_JET_CACHE: dict[tuple[ProperTerm, int, int], Jet] = {}


def row_sum_jet(term: ProperTerm, n: int, order: int) -> Jet:
    """sum(F^(n, k; t), k = 0..n) as a jet; coefficient 0 equals row_sum."""
    key = (term, n, order)
    hit = _ROW_JET_CACHE.get(key)
    if hit is not None:
        return hit
    acc = Jet.constant(0, order)
    for k in range(n + 1):
        acc = acc + term_jet(term, n, k, order)
    _ROW_JET_CACHE[key] = acc
    return acc


def coeff_c(term: ProperTerm, r: int, n: int, k: int) -> Fraction:
    """Coefficient of t^r in the deformed summand divided by the plain summand."""
    if r < 0:
        raise ValueError("coefficient index must be non-negative")
    base = term_eval(term, n, k)
    if base == 0:
        raise UndefinedCoefficientError(f"summand vanishes at (n={n}, k={k})")
    return term_jet(term, n, k, r).coeffs[r] / base


def c2_closed_form(s: int, n: int, k: int) -> Fraction:
    """The order-2 coefficient for the power-of-binomial summand, in closed
    form through harmonic partial sums:

        (s/2) * (H2(k) + H2(n-k)) + (s^2/2) * (H(n-k) - H(k))^2

    with H(m) = sum(1/i, i<=m) and H2(m) = sum(1/i^2, i<=m), empty sums zero.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    h_k = sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))
    h_nk = sum((Fraction(1, i) for i in range(1, n - k + 1)), Fraction(0))
    h2_k = sum((Fraction(1, i * i) for i in range(1, k + 1)), Fraction(0))
    h2_nk = sum((Fraction(1, i * i) for i in range(1, n - k + 1)), Fraction(0))
    return Fraction(s, 2) * (h2_k + h2_nk) + Fraction(s * s, 2) * (h_nk - h_k) ** 2
