from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from aperylimits.linalg import nullspace, rank, solve

F = Fraction


def test_nullspace_simple():
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)]]
    basis = nullspace(rows)
    assert len(basis) == 2
    for vec in basis:
        assert sum(a * b for a, b in zip(rows[0], vec)) == 0


def test_nullspace_full_rank():
    rows = [[F(1), F(0)], [F(0), F(1)]]
    assert nullspace(rows) == []
    assert rank(rows) == 2


def test_nullspace_no_rows():
    basis = nullspace([], ncols=3)
    assert len(basis) == 3


def test_solve_exact():
    rows = [[F(2), F(1)], [F(1), F(-1)]]
    x = solve(rows, [F(5), F(1)])
    assert x == [F(2), F(1)]


def test_solve_inconsistent():
    rows = [[F(1), F(1)], [F(2), F(2)]]
    assert solve(rows, [F(1), F(3)]) is None


def test_solve_underdetermined_sets_free_vars_to_zero():
    rows = [[F(1), F(1), F(1)]]
    x = solve(rows, [F(4)])
    assert x is not None
    assert sum(x) == 4


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-9, 9).map(F), min_size=4, max_size=4),
        min_size=1,
        max_size=6,
    )
)
def test_nullspace_vectors_annihilate(rows):
    basis = nullspace(rows)
    for vec in basis:
        for row in rows:
            assert sum(a * b for a, b in zip(row, vec)) == 0
    assert len(basis) + rank(rows) == 4
