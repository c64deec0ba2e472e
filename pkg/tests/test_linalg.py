import random
from fractions import Fraction as F

import sympy
from hypothesis import given, strategies as st

from tropcurves.linalg import (
    affine_solutions,
    inequalities_feasible,
    integer_kernel_basis,
    integer_rank,
    is_primitive,
    solve_integer_system,
)

ints = st.integers(min_value=-4, max_value=4)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.lists(ints, min_size=n, max_size=n), max_size=n))))
def test_kernel_basis_saturated(data):
    n, rows = data
    basis = integer_kernel_basis(rows, n)
    m = sympy.Matrix(rows) if rows else sympy.zeros(0, n)
    assert len(basis) == n - (m.rank() if rows else 0)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)
    if basis:
        # saturated: the gcd of maximal minors is 1
        b = sympy.Matrix(basis)
        from itertools import combinations
        from math import gcd
        g = 0
        for cols in combinations(range(n), len(basis)):
            g = gcd(g, int(b[:, list(cols)].det()))
        assert g == 1


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=n, max_size=n))))
def test_solve_against_sympy(data):
    a, b = data
    res = solve_integer_system(a, b)
    m = sympy.Matrix(a)
    assert abs(res.det) == abs(int(m.det()))
    if res.status == "unique":
        assert res.det == int(m.det())
        assert m * sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in res.x]) == sympy.Matrix(
            [sympy.Rational(x.numerator, x.denominator) for x in b])
    else:
        aug = m.row_join(sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in b]))
        consistent = aug.rank() == m.rank()
        assert res.status == ("underdetermined" if consistent else "inconsistent")
        sol = affine_solutions(a, b)
        assert (sol is not None) == consistent


def test_affine_solutions_family():
    x0, basis = affine_solutions([[1, 1], [2, 2]], [F(2), F(4)])
    assert len(basis) == 1
    assert x0[0] + x0[1] == 2 and basis[0][0] + basis[0][1] == 0


def test_feasibility():
    # y >= 1 and -y >= -3
    assert inequalities_feasible([[1], [-1]], [1, -3])
    assert not inequalities_feasible([[1], [-1]], [4, -3])
    assert inequalities_feasible([[1, 0], [0, 1], [-1, -1]], [0, 0, -1])
    assert not inequalities_feasible([[1, 0], [0, 1], [-1, -1]], [1, 1, -1])
    assert inequalities_feasible([], [])


def test_primitive_and_rank():
    assert is_primitive((2, 3)) and not is_primitive((2, 4)) and not is_primitive((0, 0))
    assert integer_rank([[1, 2], [2, 4]]) == 1
