import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedext.ratfun import (
    Center,
    HilbertRational,
    LaurentPolynomial,
    combine,
    equal,
    expansion_order,
    format_rational,
    invert_variable,
    laurent_expand,
    parse_rational,
    pole_order,
)


def H(text):
    return parse_rational(text)


def lp(d):
    return LaurentPolynomial(d)


def test_combine_examples():
    assert combine("mul", H("(1) / (1-t)"), HilbertRational(lp({0: 1, 1: -1}))) == 1
    s = combine("add", H("(2) / (1-t)^3"), H("(-1) / (1-t)^2"))
    assert s == H("(1 + t) / (1-t)^3")
    assert s == H("(1 - t^2) / (1-t)^4")
    q = combine("div", H("(t^2) / (1-t)^4"), H("(-t^2 - t^3) / (1-t)^3"))
    assert q == H("(-1) / (1-t^2)")


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        combine("div", H("(1) / (1-t)"), HilbertRational(0))


def test_invert_variable_examples():
    assert invert_variable(H("(1) / (1-t)")) == H("(-t) / (1-t)")
    assert invert_variable(H("(1 - t^2) / (1-t)^4")) == H("(-t^2 - t^3) / (1-t)^3")
    assert invert_variable(HilbertRational.constant(Fraction(5, 3))) == Fraction(5, 3)


def test_expand_examples():
    e = laurent_expand(H("(t^-2) / 1"), Center.ONE, 6)
    assert e.order == 0
    assert list(e.coefficients) == [j + 1 for j in range(6)]
    e = laurent_expand(H("(1) / (1-t)"), Center.ZERO, 5)
    assert e.order == 0 and list(e.coefficients) == [1] * 5
    e = laurent_expand(H("(1) / (1-t)"), Center.INFINITY, 4)
    assert e.order == 1 and list(e.coefficients) == [-1] * 4


def test_expansion_order_examples():
    assert expansion_order(laurent_expand(H("(1) / (1-t)^3"), Center.ONE)) == -3
    assert expansion_order(laurent_expand(H("(t^-2) / 1"), Center.INFINITY)) == 2
    assert expansion_order(laurent_expand(H("(1) / (1-t)^2") * H("(1 - 2t + t^2) / 1"), Center.ONE)) == 0
    assert expansion_order(laurent_expand(HilbertRational(0), Center.ONE)) == math.inf
    assert pole_order(H("(1 + t) / (1-t)^3")) == 3


def test_equal_examples():
    assert equal(H("(2) / (1-t)^3") - H("(1) / (1-t)^2"), H("(1 - t^2) / (1-t)^4"))
    assert not equal(H("(1) / (1-t)"), H("(1) / (1-t^2)"))
    assert equal(H("(1 - t^2) / (1-t)^4"), H("(1 + t) / (1-t)^3"))


def test_format_round_trip():
    for text in ["(1 + t) / (1-t)^3", "(t^-2) / 1", "(1 - 3*t^2 + 2*t^3) / (1-t)^6", "(1) / (1-t)(1-t^2)"]:
        f = H(text)
        assert format_rational(f) == text
        assert parse_rational(format_rational(f)) == f


def test_exact_division_of_laurent_polynomials():
    a = lp({0: 1, 1: 1})
    b = lp({0: 1, 1: -1})
    assert (a * b).exact_divide(b) == a


# --- properties ------------------------------------------------------------------

coeff = st.integers(-4, 4)
laurent = st.dictionaries(st.integers(-3, 4), coeff, max_size=4).map(lp)
dens = st.lists(st.integers(1, 3), max_size=3)


@st.composite
def rationals(draw):
    return HilbertRational(draw(laurent), draw(dens))


@st.composite
def nonzero_rationals(draw):
    f = draw(rationals())
    return HilbertRational(lp({0: 1}), [1]) if f.is_zero() else f


centers = st.sampled_from(list(Center))


@settings(max_examples=60, deadline=None)
@given(nonzero_rationals(), nonzero_rationals(), centers)
def test_expansion_is_multiplicative(f, g, center):
    n = 6
    ef, eg = laurent_expand(f, center, n), laurent_expand(g, center, n)
    efg = laurent_expand(f * g, center, n)
    assert efg.order == ef.order + eg.order
    assert list(efg.coefficients) == list((ef * eg).coefficients)


@settings(max_examples=60, deadline=None)
@given(nonzero_rationals())
def test_inversion_swaps_zero_and_infinity(f):
    at_inf = laurent_expand(f, Center.INFINITY, 6)
    at_zero = laurent_expand(invert_variable(f), Center.ZERO, 6)
    assert at_zero.order == at_inf.order
    assert at_zero.coefficients == at_inf.coefficients


@settings(max_examples=40, deadline=None)
@given(rationals(), centers)
def test_expansion_is_deterministic(f, center):
    assert laurent_expand(f, center, 5) == laurent_expand(f.canonical(), center, 5)


@settings(max_examples=60, deadline=None)
@given(rationals(), rationals(), rationals())
def test_equal_is_an_equivalence(f, g, h):
    assert equal(f, f)
    assert equal(f, g) == equal(g, f)
    if equal(f, g) and equal(g, h):
        assert equal(f, h)
    assert equal(f, f.canonical())


@settings(max_examples=60, deadline=None)
@given(rationals(), rationals())
def test_equal_matches_expansion_at_zero(f, g):
    # rational functions with denominators of degree <= 9 are pinned down by 30 coefficients
    n = 30
    ef = laurent_expand(f, Center.ZERO, n)
    eg = laurent_expand(g, Center.ZERO, n)
    lo = min(x for x in (ef.order, eg.order, 0) if x is not None)
    same = ef.agrees_with(eg, lo + n)
    assert same == equal(f, g)


@settings(max_examples=40, deadline=None)
@given(rationals(), rationals())
def test_field_operations_round_trip(f, g):
    assert (f + g) - g == f
    if not g.is_zero():
        assert (f * g) / g == f


def test_parse_accepts_juxtaposed_coefficients():
    assert H("(1 - 3t^2 + 2t^3) / (1-t)^6") == H("(1 - 3*t^2 + 2*t^3) / (1-t)^6")
