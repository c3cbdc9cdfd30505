"""Loop algebra of the star graph (centre w, leaves v1..vn) and its identification
with the diagram algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .basis import (
    BasisIndex,
    Family,
    enumerate_basis,
    family_of,
    to_basis,
    trace_value,
    unit_product,
)
from .diagram import Colour, Element
from .errors import ArityError, ConfigError, ValidationError
from .exactnum import Scalar, sc_sqrtn_pow

Loop = tuple  # vertices: "w" or a leaf number


@dataclass(frozen=True)
class ModelElement:
    colour: Colour
    n: int
    coeffs: dict[BasisIndex, Scalar] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "colour", Colour(*self.colour))
        object.__setattr__(self, "coeffs", {k: v for k, v in self.coeffs.items() if v})
        for idx in self.coeffs:
            if idx.colour != self.colour:
                raise ValidationError(f"index {idx} does not have colour {self.colour}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelElement):
            return NotImplemented
        return (self.colour, self.n, self.coeffs) == (other.colour, other.n, other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: ModelElement) -> ModelElement:
        _same(self, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return ModelElement(self.colour, self.n, out)

    def scale(self, c: Scalar | int) -> ModelElement:
        return ModelElement(self.colour, self.n, {k: v * c for k, v in self.coeffs.items()})

    def __iter__(self) -> Iterator[tuple[BasisIndex, Scalar]]:
        return iter(sorted(self.coeffs.items()))

    def __mul__(self, other: ModelElement) -> ModelElement:
        return model_mul(self, other)


def _same(x: ModelElement, y: ModelElement) -> None:
    if x.n != y.n:
        raise ConfigError(f"model elements over n={x.n} and n={y.n}")
    if x.colour != y.colour:
        raise ArityError(f"colour mismatch {x.colour} vs {y.colour}")


def model_identity(k: int, eps: str, n: int) -> ModelElement:
    one = Scalar(1, 0, n)
    return ModelElement((k, eps), n, {idx: one for idx in enumerate_basis(k, eps, n) if idx.i == idx.j})


def model_basis(idx: BasisIndex, n: int) -> ModelElement:
    return ModelElement(idx.colour, n, {idx: Scalar(1, 0, n)})


def model_mul(x: ModelElement, y: ModelElement) -> ModelElement:
    _same(x, y)
    out: dict[BasisIndex, Scalar] = {}
    # group y by row index so the product is linear in the number of matches
    by_row: dict[tuple, list[tuple[BasisIndex, Scalar]]] = {}
    for b, cb in y.coeffs.items():
        by_row.setdefault((b.i, b.p, b.q), []).append((b, cb))
    for a, ca in x.coeffs.items():
        for b, cb in by_row.get((a.j, a.p, a.q), ()):
            c, r = unit_product(a, b, x.n)
            if r is not None:
                v = ca * cb * c
                out[r] = out[r] + v if r in out else v
    return ModelElement(x.colour, x.n, out)


def model_star(x: ModelElement) -> ModelElement:
    return ModelElement(
        x.colour, x.n, {BasisIndex(k.family, k.j, k.i, k.p, k.q): v for k, v in x.coeffs.items()}
    )


def model_tau(x: ModelElement) -> Scalar:
    total = Scalar(0, 0, x.n)
    for idx, c in x.coeffs.items():
        total = total + c * trace_value(idx, x.n)
    return total


def iso_to_model(x: Element) -> ModelElement:
    return ModelElement(x.colour, x.n, to_basis(x))


# ---------------------------------------------------------------------------
# loops on the star graph


def _slots(idx: BasisIndex) -> tuple[int, ...]:
    """Leaf labels in the order the loop visits them."""
    rev = tuple(reversed(idx.j))
    if idx.family is Family.EVEN_PLUS:
        return idx.i + rev
    if idx.family is Family.ODD_PLUS:
        return idx.i + (idx.q,) + rev
    if idx.family is Family.EVEN_MINUS:
        return (idx.p,) + idx.i + (idx.q,) + rev
    if idx.family is Family.ODD_MINUS:
        return (idx.p,) + idx.i + rev
    return (idx.p,)


def loop_encode(idx: BasisIndex) -> Loop:
    slots = _slots(idx)
    if idx.colour.eps == "+":
        out: list = ["w"]
        for s in slots:
            out += [s, "w"]
        return tuple(out)
    out = [slots[0]]
    for s in slots[1:]:
        out += ["w", s]
    if idx.colour.k:
        out += ["w", slots[0]]
    return tuple(out)


def _check_loop(loop: Loop, n: int | None) -> None:
    if not loop:
        raise ValidationError("empty walk")
    if loop[0] != loop[-1]:
        raise ValidationError("walk is not closed")
    if len(loop) % 2 != 1:
        raise ValidationError("walk has odd length")
    for t, v in enumerate(loop):
        centre = (t % 2 == 0) == (loop[0] == "w")
        if centre and v != "w":
            raise ValidationError(f"walk does not alternate at position {t}")
        if not centre:
            if v == "w" or not isinstance(v, int) or v < 1 or (n is not None and v > n):
                raise ValidationError(f"bad leaf {v!r} at position {t}")


def loop_decode(loop: Loop, n: int | None = None) -> BasisIndex:
    _check_loop(loop, n)
    k = (len(loop) - 1) // 2
    if loop[0] == "w":
        slots = tuple(loop[1::2])
        family, m = family_of(k, "+")
        if family is Family.EVEN_PLUS:
            return BasisIndex(family, slots[:m], tuple(reversed(slots[m:])))
        return BasisIndex(family, slots[:m], tuple(reversed(slots[m + 1:])), q=slots[m])
    slots = tuple(loop[0:-1:2]) if k else (loop[0],)
    family, m = family_of(k, "-")
    p = slots[0]
    if family is Family.ZERO_MINUS:
        return BasisIndex(family, p=p)
    if family is Family.ODD_MINUS:
        return BasisIndex(family, slots[1:m + 1], tuple(reversed(slots[m + 1:])), p=p)
    return BasisIndex(family, slots[1:m + 1], tuple(reversed(slots[m + 2:])), p=p, q=slots[m + 1])


def format_loop(loop: Loop) -> str:
    return " ".join(v if v == "w" else f"v{v}" for v in loop)


def parse_loop(text: str, n: int | None = None) -> Loop:
    out: list = []
    for tok in text.split():
        if tok == "w":
            out.append("w")
        elif tok.startswith("v") and tok[1:].isdigit():
            out.append(int(tok[1:]))
        else:
            raise ValidationError(f"bad vertex {tok!r}")
    loop = tuple(out)
    _check_loop(loop, n)
    return loop


def enumerate_loops(k: int, eps: str, n: int) -> list[Loop]:
    """All closed walks of length 2k on the star graph, by depth-first search."""
    def neighbours(v):
        return range(1, n + 1) if v == "w" else ("w",)

    starts = ["w"] if eps == "+" else list(range(1, n + 1))
    found = []

    def walk(path):
        if len(path) == 2 * k + 1:
            if path[-1] == path[0]:
                found.append(tuple(path))
            return
        for v in neighbours(path[-1]):
            walk(path + [v])

    for s in starts:
        walk([s])
    return found


# ---------------------------------------------------------------------------
# spin function


@dataclass(frozen=True)
class SpinFunction:
    """Squares of the spin values at the centre and at every leaf."""

    mu_w_sq: Scalar
    mu_v_sq: Scalar

    @classmethod
    def perron_frobenius(cls, n: int) -> SpinFunction:
        # eigenvector (sqrt n, 1, ..., 1) of the star adjacency matrix
        return cls(sc_sqrtn_pow(1, n), Scalar(1, 0, n))


@dataclass(frozen=True)
class SpinReport:
    white_loop: Scalar
    black_loop_labelled: Scalar
    black_loop_unlabelled: Scalar
    trace_s: Scalar
    eigen_residual_zero: bool

    @property
    def ok(self) -> bool:
        n = self.white_loop.n
        return (
            self.eigen_residual_zero
            and self.white_loop == sc_sqrtn_pow(1, n)
            and self.black_loop_labelled == sc_sqrtn_pow(-1, n)
            and self.black_loop_unlabelled == sc_sqrtn_pow(1, n)
            and self.trace_s == Scalar(1, 0, n) / n
        )


def spin_consistency(n: int, mu: SpinFunction | None = None) -> SpinReport:
    """Loop values implied by the spin function, in squared form.

    A loop around a region coloured a, sitting in a region coloured b,
    contributes mu(a)^2 / mu(b)^2 summed over the admissible a.
    """
    mu = mu or SpinFunction.perron_frobenius(n)
    w, v = mu.mu_w_sq, mu.mu_v_sq
    # A x = sqrt(n) x with x = mu^2: centre row sums the leaves, leaf rows see the centre
    sq = sc_sqrtn_pow(1, n)
    residual = (v * n == sq * w) and (w == sq * v)
    return SpinReport(
        white_loop=w / v,
        black_loop_labelled=v / w,
        black_loop_unlabelled=(v * n) / w,
        trace_s=v / (v * n),
        eigen_residual_zero=residual,
    )
