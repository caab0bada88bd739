"""Recurrence guessing from sequence prefixes by exact nullspace computation.

A guess is an exact statement about the data it was fit on, and the last
five supplied terms are always held out of the fit, so a returned recurrence
annihilates strictly more data than it has unknowns.  Guesses remain
conjectures about the infinite sequence; downstream code re-verifies them
wherever that matters.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import PolyQ
from .linalg import nullspace
from .recurrence import NeedsMoreTermsError, Recurrence

#: terms never used in the linear solve
HOLDOUT = 5

SequencePrefix = list[Fraction]


def required_length(order: int, degree: int) -> int:
    """Minimum prefix length for searching a given (order, degree) cell."""
    return (order + 1) * (degree + 2) + order + HOLDOUT


def rec_residuals(rec: Recurrence, seq: SequencePrefix) -> SequencePrefix:
    """The defect sequence n -> sum(p_i(n) seq[n+i]); empty if seq is too short."""
    upto = len(seq) - rec.order
    return [rec.apply(seq, n) for n in range(max(0, upto))]


def _coefficient_height(rec: Recurrence) -> int:
    return max(abs(c.numerator) for p in rec.coeffs for c in p.coeffs)


def guess_recurrence(
    seq: SequencePrefix,
    max_order: int = 4,
    max_degree: int = 6,
) -> Recurrence | None:
    """Smallest (order, degree) recurrence annihilating the whole prefix.

    Cells are scanned in lexicographic (order, degree) order; within a cell
    the candidate minimizing (degree of the leading coefficient, coefficient
    height) wins.  Returns None when every feasible cell comes up empty;
    raises NeedsMoreTermsError when no cell is feasible at all.
    """
    seq = [Fraction(v) for v in seq]
    n_terms = len(seq)
    any_feasible = False
    for order in range(1, max_order + 1):
        for degree in range(0, max_degree + 1):
            if n_terms < required_length(order, degree):
                continue
            any_feasible = True
            rec = _guess_cell(seq, order, degree)
            if rec is not None:
                return rec
    if not any_feasible:
        raise NeedsMoreTermsError(
            required_length(1, 0),
            f"need at least {required_length(1, 0)} terms to search order 1, "
            f"degree 0 (and {required_length(max_order, max_degree)} for the "
            "full requested search)",
        )
    return None


def _guess_cell(seq: SequencePrefix, order: int, degree: int) -> Recurrence | None:
    n_train = len(seq) - HOLDOUT - order
    rows = []
    for n in range(n_train):
        row = []
        for i in range(order + 1):
            value = seq[n + i]
            npow = Fraction(1)
            for _ in range(degree + 1):
                row.append(npow * value)
                npow *= n
        rows.append(row)

    candidates = []
    for vec in nullspace(rows, (order + 1) * (degree + 1)):
        polys = [
            PolyQ(vec[i * (degree + 1) : (i + 1) * (degree + 1)])
            for i in range(order + 1)
        ]
        if polys[-1].is_zero():
            continue  # really a lower-order relation; that cell already ran
        rec = Recurrence(polys).normalized()
        if any(r != 0 for r in rec_residuals(rec, seq)):
            continue  # fails on held-out terms
        candidates.append(rec)
    if not candidates:
        return None
    return min(
        candidates,
        key=lambda r: (r.coeffs[-1].degree, _coefficient_height(r)),
    )
