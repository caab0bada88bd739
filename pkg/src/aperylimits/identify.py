"""High-precision constants and integer-relation detection.

Every dictionary constant is produced by two independent routes that are
cross-checked digit-for-digit before anything is returned: an in-house
exact route (scaled-integer series, accelerated alternating sums, or the
order-2 recurrence benchmark itself) and a reference route (mpmath, except
for zeta3 where both routes are in-house).  Relations come from exact LLL
reduction on the classical (identity | scaled values) embedding, are
filtered by a height bound, and are withdrawn unless their residual shrinks
appropriately when all constants are re-evaluated at double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

import mpmath

from .exact import GUARD_DIGITS, BigFloat, InsufficientPrecisionError


class UnknownConstantError(ValueError):
    """Name not in the constant dictionary."""


CONSTANT_NAMES = ("pi", "zeta2", "zeta3", "zeta5", "log2", "catalan", "gamma")

DEFAULT_BASIS = ("1", "zeta2", "zeta3", "pi^2", "log2", "log2^2")

_SERIES_GUARD = 12


# ---------------------------------------------------------------------------
# exact scaled-integer series (values returned as Fractions value ~ num/scale)


def _atan_inv_scaled(x: int, scale: int) -> int:
    """round(scale * atan(1/x)) up to a few ulps."""
    total = 0
    power = scale // x
    x2 = x * x
    j = 0
    while power:
        term = power // (2 * j + 1)
        total += -term if j % 2 else term
        power //= x2
        j += 1
    return total


def _pi_machin(digits: int) -> Fraction:
    scale = 10 ** (digits + _SERIES_GUARD)
    val = 16 * _atan_inv_scaled(5, scale) - 4 * _atan_inv_scaled(239, scale)
    return Fraction(val, scale)


def _zeta2_central_binomial(digits: int) -> Fraction:
    # 3 * sum(1 / (n^2 binom(2n, n)))
    scale = 10 ** (digits + _SERIES_GUARD)
    term = scale // 2  # n = 1
    total = term
    n = 1
    while term:
        term = term * n * n // ((2 * n + 1) * (2 * n + 2))
        n += 1
        total += term
    return Fraction(3 * total, scale)


def _zeta3_central_binomial(digits: int) -> Fraction:
    # (5/2) * sum((-1)^(n-1) / (n^3 binom(2n, n)))
    scale = 10 ** (digits + _SERIES_GUARD)
    term = scale // 2  # n = 1
    total = term
    n = 1
    while term:
        term = term * n**3 // ((n + 1) * (2 * n + 1) * (2 * n + 2))
        n += 1
        total += -term if n % 2 == 0 else term
    return Fraction(5 * total, 2 * scale)


def _zeta3_recurrence(digits: int) -> Fraction:
    # the benchmark order-2 problem converges at ~3.06 digits per step
    from .apery import rec_run, zeta3_problem

    prob = zeta3_problem()
    n = int((digits + _SERIES_GUARD) / 3.0) + 6
    a = rec_run(prob.rec, prob.init_a, n)
    b = rec_run(prob.rec, prob.init_b, n)
    return a[n] / b[n]


def _cvz_alternating(digits: int, scaled_term: Callable[[int, int], int]) -> Fraction:
    """Chebyshev-accelerated alternating sum sum((-1)^k a_k, k >= 0), with
    a_k supplied as round(scale * a_k); geometric error (3+sqrt(8))^-n."""
    scale = 10 ** (digits + _SERIES_GUARD)
    n = int((digits + _SERIES_GUARD) * math.log(10) / math.log(3 + math.sqrt(8))) + 3
    dprev, dcur = 1, 3
    for _ in range(n - 1):
        dprev, dcur = dcur, 6 * dcur - dprev
    d = dcur
    b = -1
    c = -d
    total = 0
    for k in range(n):
        c = b - c
        total += c * scaled_term(k, scale)
        b = b * 2 * (k + n) * (k - n) // ((2 * k + 1) * (k + 1))
    return Fraction(total, d * scale)


def _zeta5_series(digits: int) -> Fraction:
    eta5 = _cvz_alternating(digits, lambda k, s: s // (k + 1) ** 5)
    return eta5 * Fraction(16, 15)  # zeta(5) = eta(5) / (1 - 2^-4)


def _catalan_series(digits: int) -> Fraction:
    return _cvz_alternating(digits, lambda k, s: s // (2 * k + 1) ** 2)


def _log2_series(digits: int) -> Fraction:
    # 2 * atanh(1/3)
    scale = 10 ** (digits + _SERIES_GUARD)
    total = 0
    power = scale // 3
    j = 0
    while power:
        total += power // (2 * j + 1)
        power //= 9
        j += 1
    return Fraction(2 * total, scale)


_BERNOULLI: list[Fraction] = [Fraction(1)]


def _bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m (B_1 = -1/2 convention)."""
    while len(_BERNOULLI) <= m:
        k = len(_BERNOULLI)
        acc = Fraction(0)
        binom = 1
        for j in range(k):
            acc += binom * _BERNOULLI[j]
            binom = binom * (k + 1 - j) // (j + 1)
        _BERNOULLI.append(-acc / (k + 1))
    return _BERNOULLI[m]


def _gamma_exact_part(digits: int) -> tuple[Fraction, int]:
    """(H_M - 1/(2M) + sum(B_2k / (2k M^2k)), m) with M = 2^m chosen so the
    asymptotic tail clears the precision target; gamma = part - m*log(2)."""
    threshold = Fraction(1, 10 ** (digits + _SERIES_GUARD - 2))
    m = max(4, int(math.log2((digits + _SERIES_GUARD) * math.log(10) / (2 * math.pi))) + 2)
    while True:
        big_m = 2**m
        part = sum((Fraction(1, j) for j in range(1, big_m + 1)), Fraction(0))
        part -= Fraction(1, 2 * big_m)
        prev = None
        k = 1
        ok = False
        mpow = big_m * big_m
        while True:
            term = _bernoulli(2 * k) / (2 * k * mpow)
            if abs(term) < threshold:
                ok = True
                break
            if prev is not None and abs(term) >= abs(prev):
                break  # divergent tail reached before the target: M too small
            part += term
            prev = term
            mpow *= big_m * big_m
            k += 1
        if ok:
            return part, m
        m += 1


# ---------------------------------------------------------------------------
# the dictionary


def _mp_reference(fn) -> Callable[[int], Fraction]:
    def compute(digits: int) -> Fraction:
        with mpmath.workdps(digits + _SERIES_GUARD):
            return _mpf_to_fraction(fn(), digits + _SERIES_GUARD - 2)

    return compute


def _mpf_to_fraction(x, digits: int) -> Fraction:
    scale = 10**digits
    return Fraction(int(mpmath.floor(x * scale + mpmath.mpf("0.5"))), scale)


def _gamma_series(digits: int) -> Fraction:
    part, m = _gamma_exact_part(digits)
    return part - m * _log2_series(digits + 5)


_ROUTES: dict[str, tuple[Callable[[int], Fraction], Callable[[int], Fraction]]] = {
    "pi": (_pi_machin, _mp_reference(lambda: +mpmath.pi)),
    "zeta2": (_zeta2_central_binomial, _mp_reference(lambda: mpmath.pi**2 / 6)),
    "zeta3": (_zeta3_recurrence, _zeta3_central_binomial),
    "zeta5": (_zeta5_series, _mp_reference(lambda: mpmath.zeta(5))),
    "log2": (_log2_series, _mp_reference(lambda: mpmath.log(2))),
    "catalan": (_catalan_series, _mp_reference(lambda: +mpmath.catalan)),
    "gamma": (_gamma_series, _mp_reference(lambda: +mpmath.euler)),
}

_CACHE: dict[tuple[str, int], BigFloat] = {}


def constant(name: str, digits: int) -> BigFloat:
    """A dictionary constant to ``digits`` digits, cross-checked between two
    independently computed routes before being accepted."""
    if name not in _ROUTES:
        raise UnknownConstantError(f"unknown constant {name!r}")
    if digits < 1:
        raise ValueError("need at least one digit")
    key = (name, digits)
    if key in _CACHE:
        return _CACHE[key]
    first, second = _ROUTES[name]
    v1, v2 = first(digits), second(digits)
    if abs(v1 - v2) > Fraction(1, 10 ** (digits + 3)):
        raise ArithmeticError(
            f"cross-check failure for {name} at {digits} digits"
        )
    out = BigFloat.from_fraction(v1, digits)
    _CACHE[key] = out
    return out


def resolve_basis(names: Iterable[str], digits: int) -> list[BigFloat]:
    """Basis values for identification: dictionary names, their squares
    (``pi^2``), and the unit ``1``."""
    out = []
    for name in names:
        if name == "1":
            out.append(BigFloat.from_fraction(Fraction(1), digits))
        elif name.endswith("^2"):
            base = constant(name[:-2], digits + 5)
            with mpmath.workdps(digits + GUARD_DIGITS):
                out.append(BigFloat.from_mpf(base.value * base.value, digits))
        else:
            out.append(constant(name, digits))
    return out


# ---------------------------------------------------------------------------
# exact LLL and relation finding


def _fdot(u, v) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(u, v)), Fraction(0))


def _gso(basis):
    n = len(basis)
    mu = [[Fraction(0)] * n for _ in range(n)]
    star = []
    norms = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            mu[i][j] = _fdot(basis[i], star[j]) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(_fdot(v, v))
    return mu, norms


def lll_reduce(rows: list[list[int]], delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """Exact-arithmetic LLL reduction (rows must be independent)."""
    b = [list(map(int, r)) for r in rows]
    n = len(b)
    mu, norms = _gso(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = _gso(b)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = _gso(b)
            k = max(k - 1, 1)
    return b


def _relation_candidates(values: list[BigFloat], digits: int):
    """Candidate integer relations in LLL order, already filtered by the
    residual and height bounds."""
    if digits < 20:
        raise InsufficientPrecisionError("need at least 20 digits for detection")
    if len(values) < 2:
        raise ValueError("need at least two values")
    for v in values:
        if v.precision < digits:
            raise InsufficientPrecisionError(
                f"value carries {v.precision} digits, need {digits}"
            )
    n = len(values)
    scale = 10**digits
    with mpmath.workdps(digits + 15):
        scaled = [int(mpmath.floor(v.value * scale + mpmath.mpf("0.5"))) for v in values]
    rows = [[1 if i == j else 0 for j in range(n)] + [scaled[i]] for i in range(n)]
    height_bound = 10 ** (digits // 4)
    for vec in lll_reduce(rows):
        rel = vec[:n]
        if all(c == 0 for c in rel):
            continue
        if max(abs(c) for c in rel) >= height_bound:
            continue
        with mpmath.workdps(digits + 10):
            residual = abs(mpmath.fsum(c * v.value for c, v in zip(rel, values)))
            small_enough = residual * 10 ** ((digits + 1) // 2) < 1
        if small_enough:
            yield rel, residual


def integer_relation(values: list[BigFloat], digits: int) -> Optional[list[int]]:
    """A nonzero integer vector m with sum(m_i v_i) below 10^(-digits/2) and
    height below 10^(digits/4), or None."""
    for rel, _residual in _relation_candidates(values, digits):
        return rel
    return None


@dataclass(frozen=True)
class ConstantMatch:
    """A conjectured relation m_0*value + sum(m_i * basis_i) ~ 0.

    ``coefficients[0]`` belongs to the identified value itself and never
    vanishes; the implied closed form is value = -sum(m_i b_i)/m_0.
    """

    basis: tuple[str, ...]
    coefficients: tuple[int, ...]
    residual: BigFloat
    confidence_digits: int

    def implied_value(self, digits: int) -> BigFloat:
        vals = resolve_basis(self.basis, digits + 5)
        with mpmath.workdps(digits + GUARD_DIGITS):
            acc = mpmath.fsum(
                m * v.value for m, v in zip(self.coefficients[1:], vals)
            )
            return BigFloat.from_mpf(-acc / self.coefficients[0], digits)

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "coeffs": list(self.coefficients),
            "residual": self.residual.decimal(3),
            "confidence_digits": self.confidence_digits,
        }

    @staticmethod
    def from_json(obj: dict) -> "ConstantMatch":
        return ConstantMatch(
            tuple(obj["basis"]),
            tuple(obj["coeffs"]),
            BigFloat.from_str(obj["residual"], 10),
            int(obj["confidence_digits"]),
        )


def identify(
    value: BigFloat,
    basis_names: Iterable[str] = DEFAULT_BASIS,
    digits: int = 40,
) -> Optional[ConstantMatch]:
    """Conjecture a closed form of ``value`` over the named constants.

    A candidate relation is accepted only if re-evaluating every basis
    constant at twice the working precision shrinks the residual by at
    least 10^(digits/4), or has already reached the noise floor of the
    target's own stated precision (the target cannot be re-evaluated, so no
    further shrink is possible past it); matches are conjectures, never
    proofs.
    """
    names = tuple(basis_names)
    basis = resolve_basis(names, digits)
    values = [value] + basis
    shrink = 10 ** (digits // 4)
    for rel, residual in _relation_candidates(values, digits):
        if rel[0] == 0:
            continue  # relation among the basis constants alone
        double = 2 * digits
        basis2 = resolve_basis(names, double)
        with mpmath.workdps(double + 10):
            residual2 = abs(
                mpmath.fsum(
                    [rel[0] * value.value]
                    + [m * v.value for m, v in zip(rel[1:], basis2)]
                )
            )
            target_floor = abs(rel[0]) * mpmath.mpf(10) ** (-(value.precision - 2))
            if (
                residual2 != 0
                and residual2 > target_floor
                and residual2 * shrink > residual
            ):
                continue  # withdrawn: does not sharpen at double precision
            conf = (
                min(double, value.precision)
                if residual2 == 0
                else int(mpmath.floor(-mpmath.log10(residual2)))
            )
        return ConstantMatch(
            basis=names,
            coefficients=tuple(rel),
            residual=BigFloat.from_mpf(residual2, 10),
            confidence_digits=max(conf, 0),
        )
    return None
