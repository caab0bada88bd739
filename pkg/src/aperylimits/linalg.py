"""Exact linear algebra over the rationals.

Forward elimination is fraction-free (Bareiss) on integer-scaled rows, so no
rational normalization happens inside the O(n^3) loop; the nullspace basis is
then recovered by exact back-substitution.  Output is canonical: pivots are
the first usable column in order, and each basis vector carries a 1 in "its"
free column, which makes results reproducible across runs and across sample
points (the recurrence-interpolation code relies on that).
"""

from __future__ import annotations

import math
from fractions import Fraction

Row = list[Fraction]


def _integer_rows(rows: list[Row]) -> list[list[int]]:
    out = []
    for row in rows:
        den = math.lcm(*(c.denominator for c in row)) if row else 1
        out.append([int(c * den) for c in row])
    return out


def nullspace(rows: list[Row], ncols: int | None = None) -> list[Row]:
    """Canonical basis of the right nullspace of the matrix ``rows``.

    Every returned vector has Fraction entries and value 1 at its free
    column; the list is ordered by free-column index.
    """
    return nullspace_info(rows, ncols)[0]


def nullspace_info(
    rows: list[Row], ncols: int | None = None
) -> tuple[list[Row], list[int]]:
    """Like :func:`nullspace` but also returns the free-column indices
    (vector i owns free column i)."""
    if ncols is None:
        if not rows:
            raise ValueError("cannot infer column count from an empty matrix")
        ncols = len(rows[0])
    m = _integer_rows([list(r) for r in rows])
    nrows = len(m)

    pivot_cols: list[int] = []
    pivot_rows: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            fi = m[i][c]
            for j in range(c, ncols):
                m[i][j] = (piv * m[i][j] - fi * m[r][j]) // prev
        prev = piv
        pivot_cols.append(c)
        pivot_rows.append(r)
        r += 1
        if r == nrows:
            break

    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis: list[Row] = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        # back-substitute pivot variables from the echelon rows
        for idx in range(len(pivot_cols) - 1, -1, -1):
            row = m[pivot_rows[idx]]
            c = pivot_cols[idx]
            s = sum((row[j] * vec[j] for j in range(c + 1, ncols)), Fraction(0))
            vec[c] = -s / row[c]
        basis.append(vec)
    return basis, free_cols


def rank(rows: list[Row], ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return ncols - len(nullspace(rows, ncols)) if ncols else 0


def solve(rows: list[Row], rhs: list[Fraction]) -> Row | None:
    """One exact solution of A x = b, or None if inconsistent.

    Underdetermined systems get the canonical solution with all free
    variables set to zero.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [-b] for r, b in zip(rows, rhs)]
    for vec in nullspace(aug, ncols + 1):
        if vec[-1] != 0:
            t = vec[-1]
            return [v / t for v in vec[:-1]]
    return None
