"""Labelled flat tangles, closed diagrams and linear combinations of them.

A :class:`FlatDiagram` is a loop-free non-crossing matching on the 2k boundary
points of a box of colour (k, eps) together with spin labels on black faces.
Faces are addressed by the smallest boundary interval they touch (see
:mod:`spinplanar._glue` for the boundary conventions).

Closed loops never survive inside an :class:`Element`: whenever an operation
creates loops they are removed innermost first, a loop around an unlabelled
face contributing sqrt(n) and a loop around a face with one label
contributing 1/sqrt(n). Two distinct labels in one black face kill the term.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import _glue
from ._glue import Matching, Skeleton, face_table
from .errors import ArityError, ConfigError, ValidationError
from .exactnum import Scalar, sc_sqrtn_pow


class Colour(NamedTuple):
    k: int
    eps: str

    def __str__(self) -> str:
        return f"({self.k},{self.eps})"


def flip(eps: str) -> str:
    return "-" if eps == "+" else "+"


class Face(NamedTuple):
    address: int
    black: bool
    intervals: tuple[int, ...]


@dataclass(frozen=True, order=True)
class FlatDiagram:
    """A loop-free labelled flat tangle.

    ``labels`` is a sorted tuple of ``(face_address, label)`` pairs. An
    address may repeat before canonicalization (a multiset of labels on one
    face); canonical diagrams carry at most one label per face.
    """

    k: int
    eps: str
    matching: Matching
    labels: tuple[tuple[int, int], ...] = ()

    @property
    def colour(self) -> Colour:
        return Colour(self.k, self.eps)

    def label_map(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, tuple[int, ...]] = {}
        for address, label in self.labels:
            out[address] = out.get(address, ()) + (label,)
        return out

    def is_canonical(self) -> bool:
        addresses = [a for a, _ in self.labels]
        return len(addresses) == len(set(addresses))

    def with_labels(self, labels: Iterable[tuple[int, int]]) -> FlatDiagram:
        return FlatDiagram(self.k, self.eps, self.matching, tuple(sorted(labels)))


def make_diagram(k: int, eps: str, matching: Iterable[Sequence[int]], labels: Iterable[tuple[int, int]] = ()) -> FlatDiagram:
    """Build and validate a diagram."""
    if k < 0 or eps not in "+-" or len(eps) != 1:
        raise ValidationError(f"bad colour ({k},{eps})")
    m = tuple(sorted(tuple(sorted(c)) for c in matching))
    d = FlatDiagram(k, eps, m, tuple(sorted((int(a), int(l)) for a, l in labels)))
    validate(d)
    return d


def validate(d: FlatDiagram, n: int | None = None) -> None:
    table = face_table(d.k, d.eps, d.matching)
    for address, label in d.labels:
        if address not in {f[0] for f in table.faces}:
            raise ValidationError(f"no face with address {address} in {d}")
        if not table.black(address):
            raise ValidationError(f"label {label} on white face {address}")
        if label < 1 or (n is not None and label > n):
            raise ValidationError(f"label {label} out of range")


def faces(d: FlatDiagram) -> list[Face]:
    """The k+1 faces of ``d`` with their shading and touched intervals."""
    return [Face(*f) for f in face_table(d.k, d.eps, d.matching).faces]


def identity_matching(k: int) -> Matching:
    return tuple((t, 2 * k + 1 - t) for t in range(1, k + 1))


def identity_diagram(k: int, eps: str) -> FlatDiagram:
    return FlatDiagram(k, eps, identity_matching(k))


def spin_diagram(i: int) -> FlatDiagram:
    """S(i): the (0,-) diagram whose single black face carries label i."""
    return FlatDiagram(0, "-", (), ((0, i),))


@lru_cache(maxsize=None)
def all_matchings(k: int) -> tuple[Matching, ...]:
    """All non-crossing perfect matchings on 2k points, sorted."""

    def build(points: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
        if not points:
            yield []
            return
        first = points[0]
        for j in range(1, len(points), 2):
            inside, outside = points[1:j], points[j + 1:]
            for a in build(inside):
                for b in build(outside):
                    yield [(first, points[j])] + a + b

    return tuple(sorted(tuple(sorted(m)) for m in build(tuple(range(1, 2 * k + 1)))))


# ---------------------------------------------------------------------------
# closed diagrams


@dataclass(frozen=True)
class ClosedDiagram:
    """A nesting forest of loops with labelled faces.

    Face 0 is the external face; every other face ``f`` lies directly inside
    face ``parents[f]`` and is bounded externally by one loop. The external
    face is black iff ``eps == '-'``; shading flips with nesting depth.
    """

    eps: str
    parents: tuple[int, ...]
    labels: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.parents) != len(self.labels) or not self.parents or self.parents[0] != -1:
            raise ValidationError("malformed closed diagram")
        for f, p in enumerate(self.parents[1:], 1):
            if not 0 <= p < f:
                raise ValidationError("parents must precede children")
        for f, ls in enumerate(self.labels):
            if ls and not self.black(f):
                raise ValidationError(f"labels on white face {f}")

    @property
    def loops(self) -> int:
        return len(self.parents) - 1

    def depth(self, f: int) -> int:
        d = 0
        while f:
            f = self.parents[f]
            d += 1
        return d

    def black(self, f: int) -> bool:
        return (self.eps == "-") ^ (self.depth(f) % 2 == 1)


def closed(eps: str, faces_: Sequence[tuple[int, Sequence[int]]]) -> ClosedDiagram:
    """Build a closed diagram from ``(parent, labels)`` pairs; face 0 has parent -1."""
    return ClosedDiagram(eps, tuple(p for p, _ in faces_), tuple(tuple(sorted(ls)) for _, ls in faces_))


def graft(outer: ClosedDiagram, hole: int, inner: ClosedDiagram | None) -> ClosedDiagram:
    """Insert ``inner`` into face ``hole`` of ``outer``.

    The external face of ``inner`` merges with the hole face, so their
    shadings must agree. ``None`` inserts the unit tangle (nothing).
    """
    if inner is None:
        return outer
    if outer.black(hole) != (inner.eps == "-"):
        raise ArityError("hole shading does not match the inserted diagram")
    base = len(outer.parents)
    parents = list(outer.parents)
    labels = [list(ls) for ls in outer.labels]
    labels[hole].extend(inner.labels[0])
    for f in range(1, len(inner.parents)):
        p = inner.parents[f]
        parents.append(hole if p == 0 else base + p - 1)
        labels.append(list(inner.labels[f]))
    return ClosedDiagram(outer.eps, tuple(parents), tuple(tuple(sorted(ls)) for ls in labels))


def resolve_forest(parents: Sequence[int], labelsets: Sequence[frozenset], roots: int, rng: random.Random | None = None) -> int | None:
    """Remove loops innermost first.

    Faces ``0..roots-1`` are boundary faces (never removed); the rest form a
    forest under them. Returns the exponent of sqrt(n) accumulated, or None
    when a face is inconsistently labelled.
    """
    children = [0] * len(parents)
    for f in range(roots, len(parents)):
        children[parents[f]] += 1
    for f in range(roots):
        if len(labelsets[f]) > 1:
            return None
    leaves = [f for f in range(roots, len(parents)) if children[f] == 0]
    exponent = 0
    while leaves:
        idx = rng.randrange(len(leaves)) if rng is not None else len(leaves) - 1
        f = leaves.pop(idx)
        size = len(labelsets[f])
        if size > 1:
            return None
        exponent += 1 if size == 0 else -1
        p = parents[f]
        children[p] -= 1
        if p >= roots and children[p] == 0:
            leaves.append(p)
    return exponent


# ---------------------------------------------------------------------------
# elements


Coefficient = Scalar | int


class Element:
    """A finite linear combination of canonical flat diagrams of one colour."""

    __slots__ = ("colour", "n", "terms")

    def __init__(self, colour: Colour, n: int, terms: dict[FlatDiagram, Scalar] | None = None) -> None:
        self.colour = Colour(*colour)
        self.n = n
        self.terms: dict[FlatDiagram, Scalar] = {}
        if terms:
            for d, c in terms.items():
                if c:
                    self.terms[d] = c

    @classmethod
    def zero(cls, colour: Colour, n: int) -> Element:
        return cls(colour, n)

    @classmethod
    def from_diagram(cls, d: FlatDiagram, n: int, coeff: Coefficient = 1) -> Element:
        if not isinstance(coeff, Scalar):
            coeff = Scalar(coeff, 0, n)
        return canonicalize(d, coeff)

    @classmethod
    def identity(cls, k: int, eps: str, n: int) -> Element:
        return cls((k, eps), n, {identity_diagram(k, eps): Scalar(1, 0, n)})

    def __repr__(self) -> str:
        return f"Element({self.colour}, n={self.n}, {len(self.terms)} terms)"

    def __iter__(self) -> Iterator[tuple[FlatDiagram, Scalar]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.colour == other.colour and self.n == other.n and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def _check(self, other: Element) -> None:
        if other.n != self.n:
            raise ConfigError(f"elements over n={self.n} and n={other.n}")
        if other.colour != self.colour:
            raise ArityError(f"colour mismatch {self.colour} vs {other.colour}")

    def __add__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out[d] + c if d in out else c
        return Element(self.colour, self.n, out)

    def __neg__(self) -> Element:
        return Element(self.colour, self.n, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other: Element) -> Element:
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Coefficient) -> Element:
        if not isinstance(c, Scalar):
            c = Scalar(c, 0, self.n)
        return Element(self.colour, self.n, {d: v * c for d, v in self.terms.items()})

    def __mul__(self, other: object) -> Element:
        if isinstance(other, Element):
            return stack(self, other)
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: object) -> Element:
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented


def _accumulate(out: dict, d: FlatDiagram, c: Scalar) -> None:
    if d in out:
        out[d] = out[d] + c
    else:
        out[d] = c


def canonicalize(d: FlatDiagram, coeff: Scalar) -> Element:
    """Apply the multiplication relation to every face of ``d``."""
    table = face_table(d.k, d.eps, d.matching)
    grouped: dict[int, set[int]] = defaultdict(set)
    for address, label in d.labels:
        if not table.black(address):
            raise ValidationError(f"label {label} on white face {address}")
        grouped[address].add(label)
    colour = Colour(d.k, d.eps)
    if any(len(s) > 1 for s in grouped.values()):
        return Element(colour, coeff.n)
    labels = tuple(sorted((a, next(iter(s))) for a, s in grouped.items()))
    return Element(colour, coeff.n, {FlatDiagram(d.k, d.eps, d.matching, labels): coeff})


# ---------------------------------------------------------------------------
# skeleton-driven operations


def _labels_of(skel: Skeleton, lookups: Sequence[dict[int, tuple[int, ...]]]):
    fixed = dict(skel.fixed_labels)

    def labels(ref) -> tuple[int, ...]:
        tag, address = ref
        if tag == "fixed":
            return fixed.get(ref, ())
        if tag == "marker":
            return ()
        return lookups[tag].get(address, ())

    boundary = []
    for address, members in skel.boundary:
        s = frozenset(l for m in members for l in labels(m))
        boundary.append((address, s))
    interior = [frozenset(l for m in members for l in labels(m)) for members, _, _ in skel.interior]
    return boundary, interior


def _forest(skel: Skeleton) -> tuple[list[int], int]:
    roots = len(skel.boundary)
    root_index = {address: i for i, (address, _) in enumerate(skel.boundary)}
    parents = [-1] * roots
    for _, _, (kind, idx) in skel.interior:
        parents.append(root_index[idx] if kind == "b" else roots + idx)
    return parents, roots


def apply_skeleton(skel: Skeleton, lookups: Sequence[dict[int, tuple[int, ...]]], rng: random.Random | None = None) -> tuple[FlatDiagram, int] | None:
    """Labels onto a skeleton, loops resolved: ``(diagram, exponent)`` or None."""
    boundary, interior = _labels_of(skel, lookups)
    parents, roots = _forest(skel)
    exponent = resolve_forest(parents, [s for _, s in boundary] + interior, roots, rng)
    if exponent is None:
        return None
    labels = tuple(sorted((a, next(iter(s))) for a, s in boundary if s))
    return FlatDiagram(skel.k, skel.eps, skel.matching, labels), exponent


def skeleton_to_closed(skel: Skeleton, lookups: Sequence[dict[int, tuple[int, ...]]]) -> ClosedDiagram:
    if skel.k != 0:
        raise ArityError("skeleton is not closed")
    boundary, interior = _labels_of(skel, lookups)
    parents, _ = _forest(skel)
    labels = [tuple(sorted(boundary[0][1]))] + [tuple(sorted(s)) for s in interior]
    return ClosedDiagram(skel.eps, tuple(parents), tuple(labels))


_UNARY = {
    "cap_right": _glue.Builder.cap_right,
    "cap_left": _glue.Builder.cap_left,
    "add_string_right": _glue.Builder.add_string_right,
    "rotate": _glue.Builder.rotate,
    "reflect": _glue.Builder.reflect,
    "trace": _glue.Builder.trace,
}


@lru_cache(maxsize=200_000)
def unary_skeleton(op: str, k: int, eps: str, matching: Matching) -> Skeleton:
    b = _glue.Builder()
    box = b.piece(k, eps, matching)
    return b.finish(_UNARY[op](b, box))


@lru_cache(maxsize=500_000)
def stack_skeleton(k: int, eps: str, upper: Matching, lower: Matching) -> Skeleton:
    b = _glue.Builder()
    top = b.piece(k, eps, upper)
    bottom = b.piece(k, eps, lower)
    return b.finish(b.stack(top, bottom))


def stack_diagrams(x: FlatDiagram, y: FlatDiagram) -> tuple[FlatDiagram, int] | None:
    """``x`` above ``y`` with loops resolved: ``(diagram, sqrt(n) exponent)`` or None."""
    if (x.k, x.eps) != (y.k, y.eps):
        raise ArityError(f"cannot stack {x.colour} on {y.colour}")
    skel = stack_skeleton(x.k, x.eps, x.matching, y.matching)
    return apply_skeleton(skel, (x.label_map(), y.label_map()))


def _unary_diagram(op: str, d: FlatDiagram) -> tuple[FlatDiagram, int] | None:
    return apply_skeleton(unary_skeleton(op, d.k, d.eps, d.matching), (d.label_map(),))


def stack(x: Element, y: Element) -> Element:
    """``x`` drawn above ``y``."""
    x._check(y)
    n = x.n
    out: dict[FlatDiagram, Scalar] = {}
    for dx, cx in x.terms.items():
        for dy, cy in y.terms.items():
            r = stack_diagrams(dx, dy)
            if r is not None:
                d, e = r
                _accumulate(out, d, cx * cy * sc_sqrtn_pow(e, n))
    return Element(x.colour, n, out)


def _map_unary(op: str, x: Element, colour: Colour) -> Element:
    n = x.n
    out: dict[FlatDiagram, Scalar] = {}
    for d, c in x.terms.items():
        r = _unary_diagram(op, d)
        if r is not None:
            nd, e = r
            _accumulate(out, nd, c * sc_sqrtn_pow(e, n) if e else c)
    return Element(colour, n, out)


def _need_strings(x: Element, what: str) -> None:
    if x.colour.k == 0:
        raise ArityError(f"{what} needs k >= 1, got colour {x.colour}")


def cap_right(x: Element) -> Element:
    """Join top point k to bottom point k+1 around the right side."""
    _need_strings(x, "cap_right")
    k, eps = x.colour
    return _map_unary("cap_right", x, Colour(k - 1, eps))


def cap_left(x: Element) -> Element:
    """Join top point 1 to bottom point 2k through the marked interval."""
    _need_strings(x, "cap_left")
    k, eps = x.colour
    return _map_unary("cap_left", x, Colour(k - 1, flip(eps)))


def add_string_right(x: Element) -> Element:
    k, eps = x.colour
    return _map_unary("add_string_right", x, Colour(k + 1, eps))


def rotate_one(x: Element) -> Element:
    """Move the marked interval clockwise past one point."""
    _need_strings(x, "rotate_one")
    k, eps = x.colour
    return _map_unary("rotate", x, Colour(k, flip(eps)))


def reflect_diagram(d: FlatDiagram) -> FlatDiagram:
    """Top-bottom mirror image: point t goes to 2k+1-t."""
    k = d.k
    if k == 0:
        return d
    m = tuple(sorted(tuple(sorted((2 * k + 1 - a, 2 * k + 1 - b))) for a, b in d.matching))
    # interval t maps to interval 2k - t; readdress labels through the new face table
    new = face_table(k, d.eps, m)
    labels = []
    for t, label in d.labels:
        image = 2 * k - t if t != 2 * k else 2 * k
        labels.append((new.address_of[image], label))
    return FlatDiagram(k, d.eps, m, tuple(sorted(labels)))


def involute(x: Element) -> Element:
    return Element(x.colour, x.n, {reflect_diagram(d): c for d, c in x.terms.items()})


def trace_close(x: Element) -> list[tuple[ClosedDiagram, Scalar]]:
    """Close every diagram by nested arcs around the right; loops are kept."""
    out = []
    for d, c in sorted(x.terms.items()):
        skel = unary_skeleton("trace", d.k, d.eps, d.matching)
        out.append((skeleton_to_closed(skel, (d.label_map(),)), c))
    return out


def expand_units(x: Element) -> Element:
    """Replace every unlabelled black face by the sum over all n labels."""
    n = x.n
    out: dict[FlatDiagram, Scalar] = {}
    for d, c in x.terms.items():
        labelled = {a for a, _ in d.labels}
        free = [f.address for f in faces(d) if f.black and f.address not in labelled]
        for choice in itertools.product(range(1, n + 1), repeat=len(free)):
            nd = d.with_labels(list(d.labels) + list(zip(free, choice)))
            _accumulate(out, nd, c)
    return Element(x.colour, n, out)


def resolve_loops(t: ClosedDiagram, n: int, rng: random.Random | None = None) -> Element:
    """Reduce a closed diagram to a multiple of 1 or S(i) by loop removal."""
    sets = [frozenset(ls) for ls in t.labels]
    exponent = resolve_forest(t.parents, sets, 1, rng)
    colour = Colour(0, t.eps)
    if exponent is None:
        return Element(colour, n)
    d = FlatDiagram(0, t.eps, (), tuple((0, l) for l in sorted(sets[0])))
    return Element(colour, n, {d: sc_sqrtn_pow(exponent, n)})


# ---------------------------------------------------------------------------
# text format


def format_diagram(d: FlatDiagram) -> str:
    match = "".join(f" ({a},{b})" for a, b in d.matching)
    labels = "".join(f" {a}={l}" for a, l in d.labels)
    return f"colour {d.k} {d.eps}\nmatch:{match}\nlabels:{labels}"


def parse_diagram(text: str) -> FlatDiagram:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    if len(lines) != 3:
        raise ValidationError(f"diagram text needs 3 lines, got {len(lines)}")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "colour" or head[2] not in ("+", "-"):
        raise ValidationError(f"bad colour line {lines[0]!r}")
    k = int(head[1])
    if not lines[1].startswith("match:") or not lines[2].startswith("labels:"):
        raise ValidationError("expected 'match:' and 'labels:' lines")
    pairs = []
    for tok in lines[1][len("match:"):].split():
        a, b = tok.strip("()").split(",")
        pairs.append((int(a), int(b)))
    labels = []
    for tok in lines[2][len("labels:"):].split():
        a, l = tok.split("=")
        labels.append((int(a), int(l)))
    return make_diagram(k, head[2], pairs, labels)


# ---------------------------------------------------------------------------
# random generation (seeded, for property suites)


def random_diagram(rng: random.Random, k: int, eps: str, n: int, p_label: float = 0.6, p_extra: float = 0.0) -> FlatDiagram:
    """A random diagram; ``p_extra`` adds a second label to a face (non-canonical)."""
    matching = rng.choice(all_matchings(k))
    labels = []
    for f in face_table(k, eps, matching).faces:
        if f[1] and rng.random() < p_label:
            labels.append((f[0], rng.randint(1, n)))
            if rng.random() < p_extra:
                labels.append((f[0], rng.randint(1, n)))
    return FlatDiagram(k, eps, matching, tuple(sorted(labels)))


def random_element(rng: random.Random, k: int, eps: str, n: int, terms: int = 3) -> Element:
    out = Element((k, eps), n)
    for _ in range(terms):
        coeff = Scalar(rng.randint(-3, 3), rng.randint(-2, 2), n)
        out = out + Element.from_diagram(random_diagram(rng, k, eps, n), n, coeff)
    return out
