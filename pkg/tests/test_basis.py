from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinplanar.basis import (
    BasisIndex,
    Family,
    basis_diagram,
    enumerate_basis,
    format_index,
    from_basis,
    gram_matrix,
    jones_projection,
    parse_index,
    to_basis,
    trace_value,
    unit_product,
)
from spinplanar.diagram import Colour, Element, FlatDiagram, involute, random_element, spin_diagram, stack
from spinplanar.errors import ArityError, ValidationError
from spinplanar.evalfun import pairing, tau
from spinplanar.exactnum import Scalar, sc_sqrtn_pow

EP, EM, OP, OM, ZM = Family.EVEN_PLUS, Family.EVEN_MINUS, Family.ODD_PLUS, Family.ODD_MINUS, Family.ZERO_MINUS


def one(n: int) -> Scalar:
    return Scalar(1, 0, n)


def test_degenerate_families():
    n = 3
    [e] = enumerate_basis(0, "+", n)
    assert basis_diagram(e, n) == Element.identity(0, "+", n)
    for i, idx in enumerate(enumerate_basis(0, "-", n), 1):
        assert basis_diagram(idx, n) == Element.from_diagram(spin_diagram(i), n)
        assert format_index(idx) == f"s({i})"


def test_counts_for_two_spins():
    assert [len(enumerate_basis(k, "+", 2)) for k in range(4)] == [1, 2, 4, 8]
    assert [len(enumerate_basis(k, "-", 2)) for k in range(4)] == [2, 2, 4, 8]


def test_count_even_minus_three_spins():
    basis = enumerate_basis(4, "-", 3)
    assert len(basis) == 81 and all(b.family is EM and b.m == 1 for b in basis)


def test_enumeration_is_deterministic_and_lexicographic():
    for k in range(5):
        for eps in "+-":
            basis = enumerate_basis(k, eps, 2)
            assert basis == enumerate_basis(k, eps, 2) and len(set(basis)) == len(basis)
            keys = [(b.p or 0, b.i, b.j, b.q or 0) for b in basis]
            assert keys == sorted(keys)
            assert all(b.colour == Colour(k, eps) for b in basis)


def test_index_validation():
    with pytest.raises(ValidationError):
        BasisIndex(EP, (1,), (1, 2))
    with pytest.raises(ValidationError):
        BasisIndex(OP, (1,), (1,), 2, 1)
    with pytest.raises(ValidationError):
        basis_diagram(BasisIndex(EP, (3,), (1,)), 2)


def test_product_rules_per_family():
    n = 3
    e = lambda *a: BasisIndex(*a)
    assert unit_product(e(EP, (1,), (2,)), e(EP, (2,), (1,)), n) == (one(n), e(EP, (1,), (1,)))
    assert unit_product(e(OP, (1,), (2,), None, 3), e(OP, (2,), (3,), None, 3), n) == (one(n), e(OP, (1,), (3,), None, 3))
    assert unit_product(e(OP, (1,), (2,), None, 3), e(OP, (2,), (3,), None, 1), n)[1] is None
    assert unit_product(e(OM, (1,), (2,), 2, None), e(OM, (2,), (3,), 2, None), n) == (one(n), e(OM, (1,), (3,), 2, None))
    assert unit_product(e(EM, (1,), (2,), 1, 2), e(EM, (3,), (3,), 1, 2), n)[1] is None
    with pytest.raises(ArityError):
        unit_product(e(EP, (1,), (1,)), e(EP, (1, 1), (1, 1)), n)


def test_stacked_matrix_units():
    n = 2
    a, b = BasisIndex(EP, (1,), (2,)), BasisIndex(EP, (2,), (1,))
    assert stack(basis_diagram(a, n), basis_diagram(b, n)) == basis_diagram(BasisIndex(EP, (1,), (1,)), n)


@pytest.mark.parametrize("k", range(0, 5))
def test_stacking_reproduces_unit_products(k):
    n = 2
    for eps in "+-":
        basis = enumerate_basis(k, eps, n)
        els = {b: basis_diagram(b, n) for b in basis}
        for a in basis:
            for b in basis:
                c, r = unit_product(a, b, n)
                want = els[r].scale(c) if r is not None else Element((k, eps), n)
                assert stack(els[a], els[b]) == want


def test_even_minus_norm():
    # m = 1: n^(-m-2)
    n = 2
    x = basis_diagram(BasisIndex(EM, (1,), (2,), 2, 1), n)
    assert tau(stack(involute(x), x)) == Scalar(Fraction(1, 8), 0, n)


@pytest.mark.parametrize("k", range(0, 6))
def test_trace_table(k):
    n = 2
    for eps in "+-":
        for idx in enumerate_basis(k, eps, n):
            got = tau(basis_diagram(idx, n))
            delta = 1 if idx.i == idx.j else 0
            extra = {EP: 0, OP: 1, OM: 1, EM: 2, ZM: 1}[idx.family]
            assert got == trace_value(idx, n) == Scalar(Fraction(delta, n ** (idx.m + extra)), 0, n)


def test_involution_on_basis():
    n = 2
    for k in range(6):
        for eps in "+-":
            for idx in enumerate_basis(k, eps, n):
                star = BasisIndex(idx.family, idx.j, idx.i, idx.p, idx.q)
                assert involute(basis_diagram(idx, n)) == basis_diagram(star, n)


def test_gram_matrix_is_diagonal_positive_and_matches_pairing():
    for n in (2, 3):
        for k in range(4):
            for eps in "+-":
                basis, G = gram_matrix(k, eps, n)
                for a, row in enumerate(G):
                    for b, v in enumerate(row):
                        assert v == pairing(basis_diagram(basis[a], n), basis_diagram(basis[b], n))
                        assert (v > 0) if a == b else (v == 0)


def test_coordinates_of_identity_and_cup_cap():
    n = 3
    ident = to_basis(Element.identity(2, "+", n))
    assert ident == {BasisIndex(EP, (i,), (i,)): one(n) for i in range(1, n + 1)}
    cc = to_basis(Element.from_diagram(FlatDiagram(2, "+", ((1, 2), (3, 4))), n))
    inv_root = sc_sqrtn_pow(-1, n)
    assert cc == {BasisIndex(EP, (i,), (j,)): inv_root for i in range(1, n + 1) for j in range(1, n + 1)}
    e1 = to_basis(jones_projection(1, 2, "+", n))
    assert e1 == {BasisIndex(EP, (i,), (j,)): one(n) / n for i in range(1, n + 1) for j in range(1, n + 1)}


def test_coordinates_of_basis_elements():
    n = 2
    for k in range(5):
        for eps in "+-":
            for idx in enumerate_basis(k, eps, n):
                assert to_basis(basis_diagram(idx, n)) == {idx: one(n)}


def convolve(x: dict, y: dict, n: int) -> dict:
    out: dict = {}
    for a, ca in x.items():
        for b, cb in y.items():
            c, r = unit_product(a, b, n)
            if r is not None and c:
                out[r] = out.get(r, Scalar(0, 0, n)) + ca * cb * c
    return {k: v for k, v in out.items() if v}


@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.integers(0, 4), st.sampled_from("+-"))
def test_coordinates_are_complete_and_multiplicative(seed, n, k, eps):
    rng = random.Random(seed)
    x, y = random_element(rng, k, eps, n, 2), random_element(rng, k, eps, n, 2)
    cx, cy = to_basis(x), to_basis(y)
    rebuilt = from_basis(cx, Colour(k, eps), n)
    assert pairing(rebuilt, y) == pairing(x, y)
    assert to_basis(stack(x, y)) == convolve(cx, cy, n)


def test_jones_examples():
    for n in (2, 3):
        for k in range(2, 6):
            for eps in "+-":
                for pos in range(1, k):
                    e = jones_projection(pos, k, eps, n)
                    assert stack(e, e) == e
                    for other in (pos - 1, pos + 1):
                        if 1 <= other < k:
                            f = jones_projection(other, k, eps, n)
                            assert stack(e, stack(f, e)) == e.scale(one(n) / n)


def test_jones_position_range():
    for pos in (0, 2):
        with pytest.raises(ArityError):
            jones_projection(pos, 2, "+", 2)


def test_index_text_round_trip():
    for k in range(5):
        for eps in "+-":
            for idx in enumerate_basis(k, eps, 2):
                assert parse_index(format_index(idx)) == idx
    assert format_index(BasisIndex(EM, (1, 2), (2, 1), 1, 2)) == "e[1)^{1 2}_{2 1}(2]"
    assert parse_index("e^1_2") == BasisIndex(EP, (1,), (2,))
