from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinplanar.basis import BasisIndex, Family, basis_diagram, enumerate_basis, jones_projection
from spinplanar.diagram import Colour, Element, spin_diagram
from spinplanar.dsl import (
    BasisLit,
    DSLError,
    Gen,
    Jones,
    Lit,
    Prod,
    Sum,
    Unary,
    Unit,
    evaluate,
    parse,
    to_text,
    typecheck,
)
from spinplanar.exactnum import Scalar, sc_sqrtn_pow

N = 3
INDICES = [b for k in range(4) for eps in "+-" for b in enumerate_basis(k, eps, 2)]

leaves = st.one_of(
    st.builds(Gen, st.integers(1, 3)),
    st.builds(Unit, st.integers(0, 4), st.sampled_from("+-")),
    st.integers(2, 5).flatmap(lambda k: st.builds(Jones, st.just(k), st.sampled_from("+-"), st.integers(1, k - 1))),
    st.builds(BasisLit, st.sampled_from(INDICES)),
)
lits = st.builds(
    Lit,
    st.fractions(min_value=0, max_value=9, max_denominator=5),
    st.fractions(min_value=-9, max_value=9, max_denominator=5),
)


def _prod(draw_scalar, factors):
    return Prod(draw_scalar, tuple(factors))


def extend(children):
    unary = st.builds(Unary, st.sampled_from(["inc", "capL", "capR", "rot", "star", "tr", "expand"]), children)
    prod = st.one_of(
        st.builds(_prod, lits, st.lists(children, min_size=1, max_size=3)),
        st.builds(_prod, st.none(), st.lists(children, min_size=2, max_size=3)),
    )
    terms = st.tuples(st.sampled_from("+-"), children)
    total = st.one_of(
        st.lists(terms, min_size=2, max_size=3).map(lambda t: Sum(tuple(t))),
        children.map(lambda c: Sum((("-", c),))),
    )
    return st.one_of(unary, prod, total)


asts = st.recursive(leaves, extend, max_leaves=8)


@given(asts)
def test_parse_inverts_print(node):
    assert parse(to_text(node)) == node


@given(asts)
def test_print_after_parse_is_idempotent(node):
    text = to_text(node)
    assert to_text(parse(text)) == text
    assert to_text(parse(text.replace(" ", ""))) == text


def test_product_of_spins():
    node = parse("s(1) * s(1)")
    assert isinstance(node, Prod) and typecheck(node, N) == Colour(0, "-")
    assert evaluate(node, N) == Element.from_diagram(spin_diagram(1), N)
    assert not evaluate("s(1) * s(2)", N)


def test_trace_of_unit():
    assert typecheck(parse("tr(id(2,+))"), N) == "scalar"
    assert evaluate("tr(id(2,+))", N) == 1


def test_evaluation_examples():
    assert evaluate("capR(id(1,+))", N) == Element.identity(0, "+", N).scale(sc_sqrtn_pow(1, N))
    assert evaluate("E(2,+,1) * E(2,+,1)", N) == jones_projection(1, 2, "+", N)
    assert evaluate("tr(e[^1_2])", N) == 0
    assert evaluate("tr(e^1_1)", N) == Scalar(Fraction(1, 3), 0, N)
    x = evaluate("1/2 - 3*sqrtn * e^{1}_{2} + star(e^2_1)", N)
    e12 = basis_diagram(BasisIndex(Family.EVEN_PLUS, (1,), (2,)), N)
    assert x == e12.scale(Scalar(Fraction(3, 2), -3, N))


def test_unary_operators_follow_the_engine():
    assert evaluate("capL(inc(s(2)))", N) == Element.identity(0, "+", N).scale(sc_sqrtn_pow(-1, N))
    assert evaluate("rot(rot(rot(rot(E(2,-,1)))))", N) == jones_projection(1, 2, "-", N)
    assert evaluate("rot(E(2,+,1))", N).colour == Colour(2, "-")
    assert evaluate("expand(id(0,-))", N) == evaluate("s(1) + s(2) + s(3)", N)
    assert evaluate("tr(s(1))", N) == Scalar(Fraction(1, 3), 0, N)


def test_syntax_error_position():
    with pytest.raises(DSLError, match="line 1, column 8"):
        parse("s(1) + -s(2)")
    with pytest.raises(DSLError, match="line 2"):
        parse("s(1) +\n )")


def test_type_errors():
    for text in ("s(1) * id(1,+)", "s(1) + id(0,+)", "capR(s(1))", "E(2,+,2)", "s(4)", "inc(tr(s(1)))"):
        with pytest.raises(DSLError):
            evaluate(text, N)
