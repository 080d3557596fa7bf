from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcoef.exact import (RationalMatrix, fourier_motzkin, in_row_space, kernel_basis,
                            positive_combination, q, rank, rref, solve_particular, to_pair)

small = st.integers(-4, 4)
matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_q_accepts_exact_inputs():
    assert q("3/4") == F(3, 4)
    assert q([6, -8]) == F(-3, 4)
    assert q(5) == F(5)
    with pytest.raises(TypeError):
        q(0.5)


def test_to_pair_is_reduced():
    assert to_pair(F(6, -8)) == [-3, 4]


@given(matrices)
@settings(max_examples=60, deadline=None)
def test_rank_matches_sympy(rows):
    assert rank(rows) == sympy.Matrix(rows).rank()


@given(matrices)
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_are_annihilated(rows):
    m = RationalMatrix.from_rows(rows)
    basis = kernel_basis(m)
    assert len(basis) == m.cols - rank(rows)
    for v in basis:
        assert all(x == 0 for x in m.apply(v))


@given(matrices)
@settings(max_examples=40, deadline=None)
def test_rows_lie_in_their_own_row_space(rows):
    for r in rows:
        assert in_row_space(r, rows)


def test_rref_pivots():
    reduced, pivots = rref([[2, 4], [1, 3]])
    assert pivots == [0, 1]
    assert reduced == [[1, 0], [0, 1]]


def test_solve_particular_consistent_and_not():
    x = solve_particular([[1, 1], [1, -1]], [3, 1])
    assert x == (2, 1)
    assert solve_particular([[1, 1], [2, 2]], [1, 3]) is None


def test_fm_feasible_gives_point():
    rows = [[1, 0], [0, 1], [-1, -1]]     # a>0, b>0, a+b<0: infeasible
    res = fourier_motzkin(rows)
    assert not res.feasible
    assert frozenset({0, 1, 2}) in res.conflicts
    ok = fourier_motzkin([[1, 0], [1, 1]])
    assert ok.feasible
    a, b = ok.point
    assert a > 0 and a + b > 0


@given(st.lists(st.tuples(small, small).filter(lambda t: t != (0, 0)), min_size=1, max_size=5))
@settings(max_examples=80, deadline=None)
def test_fm_agrees_with_angular_check(rows):
    # two variables: feasible iff some direction has positive dot with all rows;
    # check against a dense sample of directions (exact rationals)
    res = fourier_motzkin([list(r) for r in rows])
    if res.feasible:
        a, b = res.point
        assert all(r[0] * a + r[1] * b > 0 for r in rows)
    else:
        for x in range(-40, 41):
            for y in (-40, 40):
                for u, v in ((x, y), (y, x)):
                    assert not all(r[0] * u + r[1] * v > 0 for r in rows)


def test_positive_combination():
    w = positive_combination([(1, 0), (0, 1), (-1, -1)])
    assert w == (1, 1, 1)
    assert positive_combination([(1, 0), (0, 1)]) is None
    w = positive_combination([(-3, 1), (2, 0), (-1, -1)])
    assert w is not None and all(x > 0 for x in w)
    total = [sum(wi * v[c] for wi, v in zip(w, [(-3, 1), (2, 0), (-1, -1)])) for c in (0, 1)]
    assert total == [0, 0]
