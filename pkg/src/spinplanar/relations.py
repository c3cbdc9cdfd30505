"""The defining relations, a few derived ones, and their evaluation under closures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .annular import AnnularTangle
from .diagram import ClosedDiagram, Colour, FlatDiagram
from .evalfun import lambda_plus, project_0minus
from .exactnum import Scalar, sc_sqrtn_pow

Piece = Union[FlatDiagram, ClosedDiagram]
Side = tuple[tuple[Scalar, Piece], ...]


@dataclass(frozen=True)
class Relation:
    name: str
    colour: Colour
    lhs: Side
    rhs: Side
    derived: bool = False


def black_channel_scale(n: int) -> Scalar:
    """Coefficient of the opened channel in the black channel relation."""
    return sc_sqrtn_pow(-1, n)


def _one(n: int) -> Scalar:
    return Scalar(1, 0, n)


def white_modulus(n: int) -> Relation:
    loop = ClosedDiagram("-", (-1, 0), ((), ()))
    unit = ClosedDiagram("-", (-1,), ((),))
    return Relation("white-modulus", Colour(0, "-"), ((_one(n), loop),), ((sc_sqrtn_pow(1, n), unit),))


def black_modulus(n: int, i: int) -> Relation:
    loop = ClosedDiagram("+", (-1, 0), ((), (i,)))
    unit = ClosedDiagram("+", (-1,), ((),))
    return Relation(f"black-modulus({i})", Colour(0, "+"), ((_one(n), loop),), ((sc_sqrtn_pow(-1, n), unit),))


def multiplication(n: int, i: int, j: int) -> Relation:
    w = ClosedDiagram("-", (-1,), (tuple(sorted((i, j))),))
    rhs = ((_one(n), ClosedDiagram("-", (-1,), ((i,),))),) if i == j else ()
    return Relation(f"multiplication({i},{j})", Colour(0, "-"), ((_one(n), w),), rhs)


def black_channel(n: int) -> Relation:
    lhs = tuple(
        (_one(n), FlatDiagram(2, "+", ((1, 2), (3, 4)), ((1, i), (3, i)))) for i in range(1, n + 1)
    )
    rhs = ((black_channel_scale(n), FlatDiagram(2, "+", ((1, 4), (2, 3)))),)
    return Relation("black-channel", Colour(2, "+"), lhs, rhs)


def unlabelled_black_loop(n: int) -> Relation:
    loop = ClosedDiagram("+", (-1, 0), ((), ()))
    unit = ClosedDiagram("+", (-1,), ((),))
    return Relation("black-loop", Colour(0, "+"), ((_one(n), loop),), ((sc_sqrtn_pow(1, n), unit),), derived=True)


def black_unit(n: int) -> Relation:
    unit = ClosedDiagram("-", (-1,), ((),))
    rhs = tuple((_one(n), ClosedDiagram("-", (-1,), ((i,),))) for i in range(1, n + 1))
    return Relation("black-unit", Colour(0, "-"), ((_one(n), unit),), rhs, derived=True)


def strand_unit(n: int) -> Relation:
    lhs = tuple((_one(n), FlatDiagram(1, "+", ((1, 2),), ((1, i),))) for i in range(1, n + 1))
    rhs = ((_one(n), FlatDiagram(1, "+", ((1, 2),))),)
    return Relation("strand-unit", Colour(1, "+"), lhs, rhs, derived=True)


def defining_relations(n: int) -> list[Relation]:
    out = [white_modulus(n)]
    out += [black_modulus(n, i) for i in range(1, n + 1)]
    out += [multiplication(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    out.append(black_channel(n))
    return out


def derived_relations(n: int) -> list[Relation]:
    return [unlabelled_black_loop(n), black_unit(n), strand_unit(n)]


def evaluate_closed(t: ClosedDiagram, n: int) -> tuple[Scalar, ...]:
    """lambda_+ for (0,+) and the lambda_-,i vector for (0,-)."""
    if t.eps == "+":
        return (lambda_plus(t, n),)
    return tuple(project_0minus(t, n))


def evaluate_side(side: Side, closure: AnnularTangle, n: int) -> tuple[Scalar, ...]:
    width = 1 if closure.output_eps == "+" else n
    total = [Scalar(0, 0, n)] * width
    for c, piece in side:
        values = evaluate_closed(closure.apply(piece), n)
        total = [a + c * v for a, v in zip(total, values)]
    return tuple(total)


def relation_holds(rel: Relation, closure: AnnularTangle, n: int) -> tuple[bool, tuple[Scalar, ...], tuple[Scalar, ...]]:
    lhs = evaluate_side(rel.lhs, closure, n)
    rhs = evaluate_side(rel.rhs, closure, n)
    return lhs == rhs, lhs, rhs
