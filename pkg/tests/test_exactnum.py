from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from spinplanar.errors import ConfigError
from spinplanar.exactnum import (
    Scalar,
    one,
    parse_scalar,
    render,
    sc_add,
    sc_inv,
    sc_mul,
    sc_sqrtn_pow,
    zero,
)

NS = [2, 3, 4, 5, 9]
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw, n=None):
    n = draw(st.sampled_from(NS)) if n is None else n
    return Scalar(draw(fractions), draw(fractions), n)


@st.composite
def scalar_triples(draw):
    n = draw(st.sampled_from(NS))
    return tuple(draw(scalars(n)) for _ in range(3))


def to_sympy(x: Scalar):
    return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(x.n)


def same(x: Scalar, expr) -> bool:
    return sympy.simplify(to_sympy(x) - expr) == 0


# --- worked values -----------------------------------------------------------


def test_componentwise_addition():
    assert sc_add(Scalar(1, 0, 2), Scalar(0, 1, 2)) == Scalar(1, 1, 2)


def test_perfect_square_folds_root():
    x = sc_add(Scalar(0, 1, 4), zero(4))
    assert (x.a, x.b) == (Fraction(2), Fraction(0))
    assert x == Scalar(2, 0, 4)


def test_root_squared_is_n():
    for n in NS:
        r = Scalar.sqrtn(n)
        assert sc_mul(r, r) == Scalar(n, 0, n)


def test_conjugate_product():
    assert sc_mul(Scalar(1, 1, 2), Scalar(1, -1, 2)) == Scalar(-1, 0, 2)


def test_inverse_values():
    assert sc_inv(Scalar(0, 1, 5)) == Scalar(0, Fraction(1, 5), 5)
    assert sc_inv(one(7)) == one(7)
    assert sc_inv(Scalar(1, 1, 3)) == Scalar(Fraction(-1, 2), Fraction(1, 2), 3)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        sc_inv(zero(2))


def test_sqrtn_pow_values():
    assert sc_sqrtn_pow(0, 3) == one(3)
    assert sc_sqrtn_pow(1, 3) == Scalar(0, 1, 3)
    assert sc_sqrtn_pow(-1, 3) == Scalar(0, Fraction(1, 3), 3)
    assert sc_sqrtn_pow(-3, 2) == Scalar(0, Fraction(1, 4), 2)


def test_mismatched_n_is_a_config_error():
    with pytest.raises(ConfigError):
        Scalar(1, 1, 2) + Scalar(1, 1, 3)
    with pytest.raises(ConfigError):
        sc_mul(Scalar(1, 1, 2), Scalar(1, 1, 3))


def test_render_examples():
    assert render(Scalar(Fraction(1, 2), Fraction(3, 4), 2)) == "1/2 + 3/4*sqrt(2)"
    assert render(Scalar(0, -1, 3)) == "-sqrt(3)"
    assert render(Scalar(5, 0, 3)) == "5"
    assert render(zero(2)) == "0"
    assert render(Scalar(0, 1, 4)) == "2"


# --- properties against sympy --------------------------------------------------


@given(scalar_triples())
def test_ring_laws(t):
    x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + zero(x.n) == x
    assert one(x.n) * x == x


@given(scalars())
def test_inverse_law(x):
    if x:
        assert x * sc_inv(x) == one(x.n)


@given(scalar_triples())
def test_arithmetic_agrees_with_sympy(t):
    x, y, _ = t
    assert same(x + y, to_sympy(x) + to_sympy(y))
    assert same(x * y, to_sympy(x) * to_sympy(y))
    if y:
        assert same(x / y, to_sympy(x) / to_sympy(y))


@given(st.sampled_from(NS), st.integers(-8, 8), st.integers(-8, 8))
def test_sqrtn_pow_additive(n, e1, e2):
    assert sc_sqrtn_pow(e1, n) * sc_sqrtn_pow(e2, n) == sc_sqrtn_pow(e1 + e2, n)
    assert same(sc_sqrtn_pow(e1, n), sympy.sqrt(n) ** e1)


@given(scalars(), scalars())
def test_equality_is_value_equality(x, y):
    if x.n == y.n:
        assert (x == y) == (sympy.simplify(to_sympy(x) - to_sympy(y)) == 0)


@given(scalars())
def test_sign_matches_value(x):
    v = to_sympy(x)
    expected = 0 if v == 0 else (1 if v > 0 else -1)
    assert x.sign() == expected


@given(scalars())
def test_render_parse_round_trip(x):
    assert parse_scalar(render(x), x.n) == x


def test_perfect_square_canonical_form_unique():
    for n, r in ((4, 2), (9, 3)):
        for a in range(-3, 4):
            for b in range(-3, 4):
                x = Scalar(a, b, n)
                assert x.b == 0 and x.a == a + b * r
