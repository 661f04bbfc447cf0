import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from truncorth.exact import (
    InexactDivision,
    PiLaurent,
    format_float,
    gamma_half,
    to_float,
    to_float_flagged,
)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
values = st.dictionaries(st.integers(-4, 4), fractions, max_size=4).map(PiLaurent)


def P(terms):
    return PiLaurent(terms)


def test_gamma_half_examples():
    assert gamma_half(1) == P({1: 1})
    assert gamma_half(7) == P({1: Fraction(15, 8)})
    assert gamma_half(8) == 6


@pytest.mark.parametrize("bad", [0, -3])
def test_gamma_half_domain(bad):
    with pytest.raises(ValueError):
        gamma_half(bad)


def test_gamma_recursion():
    for two_x in range(1, 201):
        assert gamma_half(two_x + 2) == gamma_half(two_x) * Fraction(two_x, 2)


def test_legendre_duplication():
    for L in range(1, 101):
        lhs = gamma_half(L) * gamma_half(L + 1)
        rhs = gamma_half(2 * L) * PiLaurent.monomial(Fraction(2) ** (1 - L), 1)
        assert lhs == rhs


def test_ring_examples():
    a = P({0: 1, 1: 2})
    assert a * P({-1: 1}) == P({-1: 1, 0: 2})
    assert a - a == 0
    assert (a - a).to_text() == "0"
    assert P({1: 6}) / P({1: 2}) == 3


def test_exact_division_fallback():
    a = P({0: 1, 1: 1})
    b = P({0: 1, 1: -1})
    assert (a * b) / b == a
    with pytest.raises(InexactDivision):
        P({0: 1}) / a
    with pytest.raises(ZeroDivisionError):
        a / 0


@given(values, values, values)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a


@given(values)
def test_no_zero_coefficients_stored(a):
    assert all(q != 0 for q in a.terms.values())
    assert a.is_rational() == (set(a.terms) <= {0})


def test_to_float_examples():
    assert to_float(Fraction(11, 35)) == pytest.approx(0.3142857142857143, rel=1e-15)
    assert to_float(P({-2: 1})) == pytest.approx(1 / math.pi, rel=1e-15)
    p = P({0: 1, -2: Fraction(-385024, 135135), -4: Fraction(16777216, 18729711)})
    mpmath.mp.dps = 50
    ref = 1 - mpmath.mpf(385024) / 135135 / mpmath.pi + mpmath.mpf(16777216) / 18729711 / mpmath.pi ** 2
    assert to_float(p) == pytest.approx(float(ref), rel=1e-13)
    assert round(to_float(p), 4) == 0.1838


def test_to_float_overflow_flag():
    v, flag = to_float_flagged(P({0: Fraction(10) ** 400}))
    assert v == math.inf and flag
    v, flag = to_float_flagged(P({0: Fraction(1, 3)}))
    assert not flag


@given(values, values)
def test_to_float_additive(a, b):
    lhs = to_float(a + b)
    rhs = to_float(a) + to_float(b)
    scale = sum(abs(to_float(P({s: q}))) for s, q in list(a.terms.items()) + list(b.terms.items()))
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1e-300)


@given(values)
def test_text_roundtrip(a):
    assert PiLaurent.from_text(a.to_text()) == a


@given(values)
def test_json_roundtrip(a):
    assert PiLaurent.from_json_obj(a.to_json_obj()) == a


def test_text_grammar():
    assert P({0: Fraction(1, 3), 1: -2, -2: Fraction(5, 7)}).to_text() == "1/3 - 2*pi^(1/2) + 5/7*pi^(-1)"
    assert P({-1: 1}).to_text() == "pi^(-1/2)"


def test_format_float():
    assert format_float(0.314285714285) == "0.3142857143"
    assert format_float(2.0) == "2.000000000"
    assert format_float(0.0) == "0"
