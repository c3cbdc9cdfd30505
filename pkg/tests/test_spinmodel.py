from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinplanar.basis import BasisIndex, Family, basis_diagram, enumerate_basis
from spinplanar.diagram import Element, involute, random_element, spin_diagram, stack
from spinplanar.errors import ArityError, ValidationError
from spinplanar.evalfun import tau
from spinplanar.exactnum import Scalar, sc_sqrtn_pow
from spinplanar.spinmodel import (
    ModelElement,
    SpinFunction,
    enumerate_loops,
    format_loop,
    iso_to_model,
    loop_decode,
    loop_encode,
    model_basis,
    model_identity,
    model_mul,
    model_star,
    model_tau,
    parse_loop,
    spin_consistency,
)


def random_model(rng: random.Random, k: int, eps: str, n: int) -> ModelElement:
    basis = enumerate_basis(k, eps, n)
    coeffs = {rng.choice(basis): Scalar(rng.randint(-3, 3), rng.randint(-2, 2), n) for _ in range(3)}
    return ModelElement((k, eps), n, coeffs)


def test_loop_examples():
    n = 3
    for i, idx in enumerate(enumerate_basis(0, "-", n), 1):
        assert format_loop(loop_encode(idx)) == f"v{i}"
    for q in range(1, n + 1):
        assert format_loop(loop_encode(BasisIndex(Family.ODD_PLUS, (), (), None, q))) == f"w v{q} w"
    assert len(enumerate_loops(3, "+", 2)) == 8


def test_loop_round_trip_and_count():
    for n in (2, 3):
        for k in range(6 if n == 2 else 5):
            for eps in "+-":
                basis = enumerate_basis(k, eps, n)
                loops = enumerate_loops(k, eps, n)
                assert len(loops) == len(basis)
                assert sorted(map(format_loop, loops)) == sorted(format_loop(loop_encode(b)) for b in basis)
                for b in basis:
                    assert loop_decode(loop_encode(b), n) == b
                    assert parse_loop(format_loop(loop_encode(b)), n) == loop_encode(b)


def test_bad_loops_rejected():
    for text in ("w v1 v2 w", "w v1 w v2", "v1 w v2 w v1 w"):
        with pytest.raises(ValidationError):
            loop_decode(parse_loop(text), 2)


def test_matrix_algebra_identity():
    n = 2
    for m in range(3):
        ident = model_identity(2 * m, "+", n)
        assert set(ident.coeffs) == {b for b in enumerate_basis(2 * m, "+", n) if b.i == b.j}


def test_odd_products_carry_delta():
    n = 2
    a = model_basis(BasisIndex(Family.ODD_PLUS, (1,), (2,), None, 1), n)
    b = model_basis(BasisIndex(Family.ODD_PLUS, (2,), (2,), None, 2), n)
    assert not model_mul(a, b).coeffs


def test_model_colour_mismatch():
    with pytest.raises(ArityError):
        model_mul(model_identity(1, "+", 2), model_identity(1, "-", 2))


@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.integers(0, 4), st.sampled_from("+-"))
def test_model_laws(seed, n, k, eps):
    rng = random.Random(seed)
    x, y, z = (random_model(rng, k, eps, n) for _ in range(3))
    one = model_identity(k, eps, n)
    assert model_mul(x, one) == x == model_mul(one, x)
    assert model_mul(model_mul(x, y), z) == model_mul(x, model_mul(y, z))
    assert model_star(model_star(x)) == x
    assert model_tau(model_mul(x, y)) == model_tau(model_mul(y, x))
    assert model_tau(one) == 1


def test_model_trace_of_diagonal_units():
    n = 3
    for m in range(3):
        for idx in enumerate_basis(2 * m, "+", n):
            if idx.i == idx.j:
                assert model_tau(model_basis(idx, n)) == Scalar(1, 0, n) / n**m


@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.integers(0, 4), st.sampled_from("+-"))
def test_isomorphism_is_a_star_homomorphism(seed, n, k, eps):
    rng = random.Random(seed)
    x, y = random_element(rng, k, eps, n, 2), random_element(rng, k, eps, n, 2)
    assert iso_to_model(stack(x, y)) == model_mul(iso_to_model(x), iso_to_model(y))
    assert iso_to_model(involute(x)) == model_star(iso_to_model(x))
    assert model_tau(iso_to_model(x)) == tau(x)


def test_isomorphism_on_spins_units_and_bases():
    n = 3
    for i in range(1, n + 1):
        m = iso_to_model(Element.from_diagram(spin_diagram(i), n))
        [(idx, c)] = list(m)
        assert format_loop(loop_encode(idx)) == f"v{i}" and c == 1
    for k in range(4):
        for eps in "+-":
            assert iso_to_model(Element.identity(k, eps, n)) == model_identity(k, eps, n)
            for idx in enumerate_basis(k, eps, n):
                assert iso_to_model(basis_diagram(idx, n)) == model_basis(idx, n)


def test_spin_function_report():
    for n in (2, 3, 4, 7):
        r = spin_consistency(n)
        assert r.ok
        assert r.white_loop == sc_sqrtn_pow(1, n)
        assert r.black_loop_labelled == sc_sqrtn_pow(-1, n)
        assert r.black_loop_unlabelled == sc_sqrtn_pow(1, n)
        assert r.trace_s == Scalar(1, 0, n) / n


def test_spin_function_rejects_wrong_normalisation():
    n = 3
    bad = SpinFunction(Scalar(1, 0, n), Scalar(1, 0, n))
    assert not spin_consistency(n, bad).ok
