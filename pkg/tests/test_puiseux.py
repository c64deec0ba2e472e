from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from tropcurves.errors import InvalidInput, PrecisionLoss, ZeroInverse
from tropcurves.puiseux import (
    INF,
    PuiseuxSeries,
    format_series,
    parse_series,
    ps_arith,
    ps_inverse,
    ps_valuation,
    series_from_json,
    series_to_json,
)

from conftest import exact_series

S = parse_series


def test_parse_and_valuation():
    assert ps_valuation(S("t^-2 + 1")) == -2
    assert ps_valuation(S("2 + t + 4t^3")) == 0
    assert ps_valuation(S("1/2 t^(5/2) + t^3")) == F(5, 2)
    assert ps_valuation(PuiseuxSeries()) == INF


def test_cancellation_in_difference():
    assert ps_valuation(S("2 + t + 4t^3 - t^4") - S("2 + t + 4t^3")) == 4
    assert ps_valuation(S("t^-2 + 1") - S("t^-2")) == 0


def test_arith_ops():
    a, b = S("1 + t"), S("1 - t")
    assert ps_arith("mul", a, b) == S("1 - t^2")
    assert ps_arith("add", a, b) == S("2")
    assert ps_arith("sub", a, b) == S("2t")
    assert ps_arith("neg", a) == S("-1 - t")
    with pytest.raises(InvalidInput):
        ps_arith("div", a, b)


def test_inverse_geometric_series():
    inv = ps_inverse(S("1 + t"), 4)
    assert inv.precision == 4
    assert inv.terms == ((0, 1), (1, -1), (2, 1), (3, -1))
    prod = inv * S("1 + t")
    assert prod.terms == ((0, 1),)


def test_inverse_shifts_valuation_and_precision():
    inv = ps_inverse(S("2t^3 + t^4"), 2)
    assert ps_valuation(inv) == -3
    assert inv.precision == -1
    assert inv.terms[0] == (-3, F(1, 2))


def test_monomial_inverse_exact():
    inv = ps_inverse(S("4t^-2"))
    assert inv.is_exact and inv == S("1/4 t^2")


def test_zero_inverse():
    with pytest.raises(ZeroInverse):
        ps_inverse(PuiseuxSeries())


def test_precision_loss():
    a = ps_inverse(S("1 + t"), 2)  # 1 - t + O(t^2)
    b = a - S("1 - t")
    with pytest.raises(PrecisionLoss):
        ps_valuation(b)


def test_format_round_trip_examples():
    for txt in ["t^-2 + 1", "2 + t + 4t^3 - t^4", "-1/2*t^(5/2)", "O(t^3)", "1 - t + O(t^2)"]:
        s = S(txt)
        assert S(format_series(s)) == s


def test_parse_errors():
    for bad in ["", "t^", "1 2", "x + 1"]:
        with pytest.raises(InvalidInput):
            S(bad)


@given(exact_series(), exact_series())
def test_ultrametric(a, b):
    va, vb, vs = ps_valuation(a), ps_valuation(b), ps_valuation(a + b)
    assert vs >= min(va, vb)
    if va != vb:
        assert vs == min(va, vb)


@given(exact_series(nonzero=True), exact_series(nonzero=True))
def test_valuation_multiplicative(a, b):
    assert ps_valuation(a * b) == ps_valuation(a) + ps_valuation(b)


@settings(max_examples=60)
@given(exact_series(nonzero=True))
def test_inverse_round_trip(a):
    inv = ps_inverse(a, 3)
    assert ps_valuation(inv) == -ps_valuation(a)
    prod = a * inv
    # every known term other than the constant 1 vanishes below the bound
    assert [t for t in prod.terms if t != (0, 1)] == []
    assert (0, 1) in prod.terms


@given(exact_series())
def test_serialization_identity(a):
    assert S(format_series(a)) == a
    assert series_from_json(series_to_json(a)) == a
