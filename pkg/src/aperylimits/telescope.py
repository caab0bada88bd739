"""Indefinite and definite telescoping of proper hypergeometric terms.

``gosper`` decides whether a hypergeometric term g(k), given by its
consecutive-term ratio, has a hypergeometric antidifference, and returns the
multiplier S with G = S*g, G(k+1) - G(k) = g(k).

``zeilberger`` finds, for a bivariate proper term F(n,k), the minimal-order
relation

    sum(p_i(n) * F(n+i, k), i = 0..L)  =  G(n, k+1) - G(n, k)

together with the certificate ratio R = G/F.  The parametric Gosper system
is solved exactly at many specific integer values of n and the solution
coordinates, which are rational functions of n, are recovered by exact
rational interpolation with held-out sample points; the output is then
re-verified against row sums and by evaluating the certificate identity on a
lattice, so an interpolation mishap can only ever surface as a loud failure,
never as a wrong recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import PolyQ
from .hyperterm import Poly2, ProperTerm, row_sum
from .linalg import nullspace, nullspace_info, solve
from .recurrence import Recurrence

#: shifts examined when splitting off the gcd-free part; root distances of
#: the factorial factors in the corpus are tiny, and a miss cannot produce a
#: wrong answer (outputs are verified), only a spurious "not summable"
DISPERSION_BOUND = 40

_SAMPLE_BASE = 401
_SAMPLE_STEP = 2
_FIT_HOLDOUT = 3


class OrderExceededError(ArithmeticError):
    """No telescoped recurrence up to the requested order."""


class InconclusiveCheckError(ArithmeticError):
    """Too many lattice points skipped at certificate poles."""


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of univariate polynomials over Q in canonical form:
    coprime, integer-primitive, positive leading denominator coefficient."""

    num: PolyQ
    den: PolyQ

    def __init__(self, num, den=None):
        num = num if isinstance(num, PolyQ) else PolyQ([num])
        den = den if isinstance(den, PolyQ) else PolyQ([den if den is not None else 1])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = PolyQ(), PolyQ([1])
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            scale = den.content()
            if den.coeffs[-1] < 0:
                scale = -scale
            num, den = num * (1 / scale), den * (1 / scale)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num * other, self.den)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (other * -1)

    def shift(self, h) -> "RationalFunction":
        return RationalFunction(self.num.shift(h), self.den.shift(h))

    def __call__(self, x) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class Certificate:
    """The ratio R(n,k) = G(n,k)/F(n,k) as a quotient of bivariate polynomials."""

    num: Poly2
    den: Poly2

    def ratio_at(self, n: int, k: int) -> Fraction | None:
        """Exact value, or None at a pole."""
        dpoly = self.den.at_n(Fraction(n))
        d = dpoly(k)
        if d == 0:
            return None
        return self.num.at_n(Fraction(n))(k) / d

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(obj: dict) -> "Certificate":
        return Certificate(Poly2.from_json(obj["num"]), Poly2.from_json(obj["den"]))


# ---------------------------------------------------------------------------
# Gosper machinery


def gosper_normal(
    num: PolyQ, den: PolyQ, bound: int = DISPERSION_BOUND
) -> tuple[PolyQ, PolyQ, PolyQ]:
    """Split num/den as (a/b) * (c(k+1)/c(k)) with gcd(a(k), b(k+h)) = 1
    for every shift 0 <= h <= bound."""
    a, b, c = num, den, PolyQ([1])
    for h in range(bound + 1):
        while True:
            g = a.gcd(b.shift(h))
            if g.degree <= 0:
                break
            a = a.exact_div(g)
            b = b.exact_div(g.shift(-h))
            for j in range(1, h + 1):
                c = c * g.shift(-j)
    return a, b, c


def _x_degree_candidates(a: PolyQ, b_minus: PolyQ, rhs_deg: int) -> list[int]:
    """Gosper's bound for the degree of the polynomial unknown x in
    a(k) x(k+1) - b(k-1) x(k) = rhs(k)."""
    splus = a + b_minus
    sminus = a - b_minus
    cands = []
    if not sminus.is_zero() and sminus.degree >= splus.degree:
        cands.append(rhs_deg - sminus.degree)
    else:
        cands.append(rhs_deg - splus.degree + 1)
        if not sminus.is_zero() and sminus.degree == splus.degree - 1:
            ratio = -2 * sminus.coeffs[-1] / splus.coeffs[-1]
            if ratio.denominator == 1 and ratio >= 0:
                cands.append(int(ratio))
    return cands


def _poly_columns(a: PolyQ, b_minus: PolyQ, d: int) -> list[PolyQ]:
    """Column polynomials for the unknowns x_0..x_d."""
    cols = []
    kplus1 = PolyQ([1, 1])
    for m in range(d + 1):
        cols.append(a * kplus1**m - b_minus * PolyQ.x() ** m)
    return cols


def _coefficient_rows(columns: list[PolyQ]) -> list[list[Fraction]]:
    height = max((c.degree for c in columns), default=-1) + 1
    rows = []
    for j in range(height):
        rows.append(
            [c.coeffs[j] if j <= c.degree else Fraction(0) for c in columns]
        )
    return rows


def gosper(
    ratio: RationalFunction, dispersion_bound: int = DISPERSION_BOUND
) -> RationalFunction | None:
    """Antidifference multiplier for the term with the given consecutive
    ratio, or None when no hypergeometric antidifference exists."""
    if ratio.is_zero():
        raise ValueError("consecutive-term ratio must be nonzero")
    a, b, c = gosper_normal(ratio.num, ratio.den, dispersion_bound)
    b_minus = b.shift(-1)
    best = max((d for d in _x_degree_candidates(a, b_minus, c.degree)), default=-1)
    if best < 0:
        return None
    columns = _poly_columns(a, b_minus, best)
    rows = _coefficient_rows(columns + [c])
    mat = [r[:-1] for r in rows]
    rhs = [r[-1] for r in rows]
    x = solve(mat, rhs)
    if x is None:
        return None
    s = RationalFunction(b_minus * PolyQ(x), c)
    # the defining identity must hold as a rational identity
    lhs = s.shift(1) * ratio - s
    assert lhs.num == lhs.den, "antidifference identity failed"
    return s


# ---------------------------------------------------------------------------
# term ratios as rational functions of k at a specific integer n


def _rising_quotient(m: PolyQ, d: int) -> RationalFunction:
    """(m + d)! / m! as a rational function (m a polynomial argument)."""
    if d >= 0:
        num = PolyQ([1])
        for j in range(1, d + 1):
            num = num * (m + PolyQ([j]))
        return RationalFunction(num, PolyQ([1]))
    den = PolyQ([1])
    for j in range(0, -d):
        den = den * (m - PolyQ([j]))
    return RationalFunction(PolyQ([1]), den)


def term_ratio_k(term: ProperTerm, n: int) -> RationalFunction:
    """F(n, k+1) / F(n, k) in k, at the given integer n."""
    p = term.poly.at_n(Fraction(n))
    rf = RationalFunction(p.shift(1), p) * term.weight
    for (a, b, c) in term.num_factors:
        rf = rf * _rising_quotient(PolyQ([a * n + c, b]), b)
    for (u, v, w) in term.den_factors:
        q = _rising_quotient(PolyQ([u * n + w, v]), v)
        rf = rf * RationalFunction(q.den, q.num)
    return rf


def term_ratio_shift(term: ProperTerm, i: int, n: int) -> RationalFunction:
    """F(n+i, k) / F(n, k) in k, at the given integer n."""
    rf = RationalFunction(term.poly.at_n(Fraction(n + i)), term.poly.at_n(Fraction(n)))
    for (a, b, c) in term.num_factors:
        rf = rf * _rising_quotient(PolyQ([a * n + c, b]), a * i)
    for (u, v, w) in term.den_factors:
        q = _rising_quotient(PolyQ([u * n + w, v]), u * i)
        rf = rf * RationalFunction(q.den, q.num)
    return rf


# ---------------------------------------------------------------------------
# parametric solve at one integer n


def _poly_lcm(polys: list[PolyQ]) -> PolyQ:
    acc = PolyQ([1])
    for p in polys:
        g = acc.gcd(p)
        acc = acc.exact_div(g) * p if g.degree > 0 else acc * p
    return acc.monic()


@dataclass
class _SampleSolution:
    n0: int
    signature: tuple
    vector: list[Fraction] | None  # None: no telescoped relation at this order
    d: int
    order: int
    cert_num: PolyQ | None = None
    cert_den: PolyQ | None = None


def _analyze_at(term: ProperTerm, order: int, n0: int, bound: int):
    """Normal-form data of the parametric problem at one integer n."""
    shifts = [term_ratio_shift(term, i, n0) for i in range(order + 1)]
    q0 = _poly_lcm([s.den for s in shifts])
    sigmas = [s.num * q0.exact_div(s.den) for s in shifts]

    rk = term_ratio_k(term, n0)
    ratio_h = rk * RationalFunction(q0, q0.shift(1))
    a, b, c = gosper_normal(ratio_h.num, ratio_h.den, bound)
    rhss = [c * s for s in sigmas]
    cands = _x_degree_candidates(a, b.shift(-1), max(r.degree for r in rhss))
    return a, b, c, q0, rhss, cands


def probe_x_degree(term: ProperTerm, order: int, n0s, bound: int) -> int:
    """The ansatz degree for the unknown polynomial, agreed across probes.

    A degree candidate is only valid if it is the same integer at every
    probe point: a candidate that moves with n is a sampling artifact, not
    the degree of a solution defined over rational functions of n.
    """
    cand_lists = [_analyze_at(term, order, n0, bound)[5] for n0 in n0s]
    accepted = [
        v for v in cand_lists[0] if all(v in other for other in cand_lists[1:])
    ]
    return max(max(accepted, default=-1) + 2, 2)


def _solve_at(term: ProperTerm, order: int, n0: int, bound: int, d: int) -> _SampleSolution:
    a, b, c, q0, rhss, _ = _analyze_at(term, order, n0, bound)
    b_minus = b.shift(-1)

    columns = _poly_columns(a, b_minus, d) + [-r for r in rhss]
    rows = _coefficient_rows(columns)
    basis, free_cols = nullspace_info(rows, len(columns))

    chosen = None
    chosen_col = None
    for fc, vec in zip(free_cols, basis):
        if any(v != 0 for v in vec[d + 1 :]):
            chosen, chosen_col = vec, fc
            break

    sig = (
        d,
        a.degree,
        b.degree,
        c.degree,
        q0.degree,
        tuple(free_cols),
        chosen_col,
    )
    sol = _SampleSolution(n0, sig, chosen, d, order)
    if chosen is not None:
        x_poly = PolyQ(chosen[: d + 1])
        num = b_minus * x_poly
        den = c * q0
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.coeffs[-1]
        sol.cert_num = num * (1 / lc)
        sol.cert_den = den.monic()
        sol.signature = sig + (sol.cert_num.degree, sol.cert_den.degree)
    return sol


# ---------------------------------------------------------------------------
# exact rational-function interpolation


def fit_rational_function(
    points: list[tuple[int, Fraction]], max_degree: int = 40
) -> RationalFunction | None:
    """Smallest rational function passing through all points exactly."""
    for total in range(0, max_degree + 1):
        for dden in range(0, total + 1):
            dnum = total - dden
            need = dnum + dden + 2
            if need > len(points):
                break
            fit = _fit_cell(points, dnum, dden)
            if fit is not None:
                return fit
    return None


def _fit_cell(points, dnum, dden) -> RationalFunction | None:
    use = points[: dnum + dden + 2]
    rows = []
    for x, y in use:
        xf = Fraction(x)
        row = [xf**j for j in range(dnum + 1)]
        row += [-y * xf**j for j in range(dden + 1)]
        rows.append(row)
    for vec in nullspace(rows, dnum + dden + 2):
        num, den = PolyQ(vec[: dnum + 1]), PolyQ(vec[dnum + 1 :])
        if den.is_zero():
            continue
        if all(den(x) != 0 and num(x) == y * den(x) for x, y in points):
            return RationalFunction(num, den)
    return None


# ---------------------------------------------------------------------------
# Zeilberger's algorithm


def zeilberger(
    term: ProperTerm,
    max_order: int = 6,
    dispersion_bound: int = DISPERSION_BOUND,
) -> tuple[Recurrence, Certificate]:
    """Minimal-order telescoped recurrence for sum(F(n,k), k=0..n), plus its
    certificate.  Raises OrderExceededError when no order <= max_order works."""
    for order in range(1, max_order + 1):
        got = _telescope_order(term, order, dispersion_bound)
        if got is not None:
            return got
    raise OrderExceededError(f"no telescoped recurrence up to order {max_order}")


def _telescope_order(term, order, bound):
    samples: list[_SampleSolution] = []
    probes = [_SAMPLE_BASE + _SAMPLE_STEP * j for j in range(3)]
    d_fixed = probe_x_degree(term, order, probes, bound)

    def extend(upto: int):
        while len(samples) < upto:
            n0 = _SAMPLE_BASE + _SAMPLE_STEP * len(samples)
            samples.append(_solve_at(term, order, n0, bound, d_fixed))

    extend(4)
    if all(s.vector is None for s in samples):
        return None

    sigs = [s.signature for s in samples if s.vector is not None]
    lead_sig = max(set(sigs), key=sigs.count)

    # keep only samples agreeing with the dominant shape
    def consistent():
        return [s for s in samples if s.vector is not None and s.signature == lead_sig]

    good = consistent()
    if len(good) < 3:
        extend(8)
        good = consistent()
        if len(good) < 3:
            return None

    d = good[0].d
    n_unknowns = d + 1 + order + 1

    def fit_coordinate(values_of) -> list[RationalFunction] | None:
        nonlocal good
        fits = []
        idx = 0
        while idx < len(values_of):
            pts = [(s.n0, values_of[idx](s)) for s in good]
            fit = fit_rational_function(pts[:-_FIT_HOLDOUT] if len(pts) > _FIT_HOLDOUT + 4 else pts)
            if fit is not None and all(fit.den(x) != 0 and fit(x) == y for x, y in pts):
                fits.append(fit)
                idx += 1
                continue
            if len(samples) >= 90:
                return None
            extend(len(samples) + 8)
            good = consistent()
        return fits

    p_getters = [
        (lambda s, i=i: s.vector[d + 1 + i]) for i in range(order + 1)
    ]
    p_fits = fit_coordinate(p_getters)
    if p_fits is None:
        raise RuntimeError("failed to interpolate recurrence coefficients")

    den_lcm = _poly_lcm([f.den for f in p_fits])
    coeffs = [f.num * den_lcm.exact_div(f.den) for f in p_fits]
    if coeffs[-1].is_zero():
        return None
    rec = Recurrence(coeffs).normalized()

    data = [row_sum(term, n) for n in range(order + 16)]
    if any(rec.apply(data, n) != 0 for n in range(len(data) - order)):
        raise RuntimeError("interpolated recurrence fails on row sums")

    # normalization rescaled the p_i by a rational function of n; the
    # certificate G = R*F picks up the same factor
    gamma = RationalFunction(rec.coeffs[-1] * p_fits[-1].den, p_fits[-1].num)
    for i in range(order + 1):
        scaled = gamma * p_fits[i]
        if not (scaled.num - rec.coeffs[i] * scaled.den).is_zero():
            raise RuntimeError("inconsistent recurrence rescaling")

    dn = good[0].cert_num.degree
    dd = good[0].cert_den.degree
    num_getters = [
        (lambda s, j=j: s.cert_num.coeffs[j] if j <= s.cert_num.degree else Fraction(0))
        for j in range(dn + 1)
    ]
    den_getters = [
        (lambda s, j=j: s.cert_den.coeffs[j] if j <= s.cert_den.degree else Fraction(0))
        for j in range(dd + 1)
    ]
    num_fits = fit_coordinate(num_getters)
    den_fits = fit_coordinate(den_getters)
    if num_fits is None or den_fits is None:
        raise RuntimeError("failed to interpolate the certificate")

    num_fits = [gamma * f for f in num_fits]
    delta = _poly_lcm([f.den for f in num_fits + den_fits])
    num_cols = [f.num * delta.exact_div(f.den) for f in num_fits]
    den_cols = [f.num * delta.exact_div(f.den) for f in den_fits]
    cert = Certificate(_poly2_from_k_columns(num_cols), _poly2_from_k_columns(den_cols))

    if not check_certificate(term, rec, cert, 8):
        raise RuntimeError("certificate verification failed on the lattice")
    return rec, cert


def _poly2_from_k_columns(cols: list[PolyQ]) -> Poly2:
    """Build P(n,k) from the polynomials-in-n multiplying each power of k."""
    n_deg = max((c.degree for c in cols), default=-1)
    rows = []
    for i in range(n_deg + 1):
        rows.append(
            PolyQ(
                [c.coeffs[i] if i <= c.degree else Fraction(0) for c in cols]
            )
        )
    return Poly2(rows)


def check_certificate(
    term: ProperTerm, rec: Recurrence, cert: Certificate, n_max: int
) -> bool:
    """Exact check of the telescoping identity for every integer n <= n_max.

    The identity is verified in the form divided by F(n,k), where both sides
    are rational functions of k: this covers every lattice point 0 <= k <=
    n + order at once and sidesteps the 0 * infinity products that the raw
    G = R*F form develops where the term leaves its support.  An n at which
    the certificate or the term ratios degenerate (a denominator vanishing
    identically) is skipped and counted; more than 10% skipped rows raise
    InconclusiveCheckError instead of pretending a pass.
    """
    order = rec.order
    total = 0
    skipped = 0
    for n in range(n_max + 1):
        total += 1
        num_k = cert.num.at_n(Fraction(n))
        den_k = cert.den.at_n(Fraction(n))
        if den_k.is_zero() or term.poly.at_n(Fraction(n)).is_zero():
            skipped += 1
            continue
        ratio = RationalFunction(num_k, den_k)
        lhs = RationalFunction(PolyQ())
        for i in range(order + 1):
            ci = rec.coeffs[i](n)
            if ci:
                lhs = lhs + term_ratio_shift(term, i, n) * ci
        rhs = ratio.shift(1) * term_ratio_k(term, n) - ratio
        diff = lhs - rhs
        if not diff.num.is_zero():
            return False
    if total and skipped * 10 > total:
        raise InconclusiveCheckError(
            f"{skipped} of {total} rows hit degenerate certificate denominators"
        )
    return True
