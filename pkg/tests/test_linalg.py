from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polycommutant.linalg import InconsistentSystem, RowSpace, nullspace, rank, solve

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def dense_rows(draw_rows, ncols):
    return [{j: v for j, v in enumerate(r) if v} for r in draw_rows]


matrices = st.integers(1, 5).flatmap(
    lambda ncols: st.tuples(st.just(ncols), st.lists(st.lists(fractions, min_size=ncols, max_size=ncols),
                                                     min_size=1, max_size=5)))


def to_sympy(rows, ncols):
    return sympy.Matrix([[sympy.Rational(r.get(j, 0).numerator, r.get(j, 0).denominator)
                          if isinstance(r.get(j, 0), Fraction) else r.get(j, 0) for j in range(ncols)]
                         for r in rows])


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_matches_sympy(data):
    ncols, raw = data
    rows = dense_rows(raw, ncols)
    assert rank(rows) == to_sympy(rows, ncols).rank()


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_nullspace_vectors_annihilate_and_have_right_count(data):
    ncols, raw = data
    rows = dense_rows(raw, ncols)
    kernel = nullspace(rows, ncols)
    assert len(kernel) == ncols - rank(rows)
    for v in kernel:
        for r in rows:
            assert sum(r.get(j, 0) * v.get(j, 0) for j in range(ncols)) == 0


def test_rowspace_add_reports_rank_growth():
    space = RowSpace()
    assert space.add({0: 1, 1: 2})
    assert not space.add({0: Fraction(1, 2), 1: 1})
    assert space.add({1: 3})
    assert space.contains({0: 5, 1: -7})
    assert len(space) == 2


def test_rowspace_stays_integral():
    space = RowSpace()
    space.add({0: Fraction(2, 3), 2: Fraction(1, 7)})
    space.add({1: Fraction(5, 2), 2: Fraction(-1, 3)})
    for row in space.pivots.values():
        assert all(isinstance(v, int) for v in row.values())


def test_solve_with_arbitrary_keys():
    cols = [{"a": 1, "b": 1}, {"b": 1, "c": 2}]
    x = solve(cols, {"a": 2, "b": 5, "c": 6})
    assert x == {0: Fraction(2), 1: Fraction(3)}


def test_solve_inconsistent():
    with pytest.raises(InconsistentSystem):
        solve([{"a": 1}], {"b": 1})


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(fractions, min_size=5, max_size=5))
def test_solve_reproduces_reachable_targets(data, coeffs):
    ncols, raw = data
    rows = dense_rows(raw, ncols)
    # columns of the transposed system: target = sum_j c_j * column_j
    columns = [{i: r.get(j, 0) for i, r in enumerate(rows)} for j in range(ncols)]
    target = {}
    for j in range(ncols):
        for i, v in columns[j].items():
            target[i] = target.get(i, 0) + coeffs[j] * v
    x = solve(columns, target)
    for i in range(len(rows)):
        assert sum(x.get(j, 0) * columns[j].get(i, 0) for j in range(ncols)) == target.get(i, 0)
