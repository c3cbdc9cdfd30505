"""Orthogonal bases of the spaces P(k, eps) and the matrix-unit calculus.

Basis diagrams are laid out as follows (weights (sqrt n)^m included):

* ``EvenPlus`` (2m,+): m caps (2t-1, 2t) along the top with label i_t inside,
  m cups directly below them with label j_t inside.
* ``OddPlus`` (2m+1,+): as EvenPlus plus a rightmost through strand whose
  right-hand black face carries q.
* ``OddMinus`` (2m+1,-): a leftmost through strand, the marked black face
  carrying p, caps (2t, 2t+1) and the matching cups.
* ``EvenMinus`` (2m+2,-): both outer through strands, labels p and q.
* ``ZeroMinus`` (0,-): S(p).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator

from ._glue import face_table
from .diagram import Colour, Element, FlatDiagram, identity_matching
from .errors import ArityError, ValidationError
from .evalfun import sphere_pairing, sphere_skeleton
from .exactnum import Scalar, sc_sqrtn_pow


class Family(str, Enum):
    EVEN_PLUS = "EvenPlus"
    EVEN_MINUS = "EvenMinus"
    ODD_PLUS = "OddPlus"
    ODD_MINUS = "OddMinus"
    ZERO_MINUS = "ZeroMinus"


@dataclass(frozen=True, order=True)
class BasisIndex:
    family: Family
    i: tuple[int, ...] = ()
    j: tuple[int, ...] = ()
    p: int | None = None
    q: int | None = None

    def __post_init__(self) -> None:
        if len(self.i) != len(self.j):
            raise ValidationError("i and j must have equal length")
        need_p = self.family in (Family.EVEN_MINUS, Family.ODD_MINUS, Family.ZERO_MINUS)
        need_q = self.family in (Family.EVEN_MINUS, Family.ODD_PLUS)
        if (self.p is not None) != need_p or (self.q is not None) != need_q:
            raise ValidationError(f"decorations do not fit family {self.family.value}")
        if self.family is Family.ZERO_MINUS and self.i:
            raise ValidationError("S(p) carries no i, j")

    @property
    def m(self) -> int:
        return len(self.i)

    @property
    def colour(self) -> Colour:
        m = self.m
        return {
            Family.EVEN_PLUS: Colour(2 * m, "+"),
            Family.ODD_PLUS: Colour(2 * m + 1, "+"),
            Family.ODD_MINUS: Colour(2 * m + 1, "-"),
            Family.EVEN_MINUS: Colour(2 * m + 2, "-"),
            Family.ZERO_MINUS: Colour(0, "-"),
        }[self.family]

    def labels(self) -> tuple[int, ...]:
        out = list(self.i + self.j)
        out += [x for x in (self.p, self.q) if x is not None]
        return tuple(out)

    def __str__(self) -> str:
        return format_index(self)


def family_of(k: int, eps: str) -> tuple[Family, int]:
    """The family and m for colour (k, eps)."""
    if eps == "+":
        return (Family.EVEN_PLUS, k // 2) if k % 2 == 0 else (Family.ODD_PLUS, (k - 1) // 2)
    if k == 0:
        return Family.ZERO_MINUS, 0
    return (Family.EVEN_MINUS, (k - 2) // 2) if k % 2 == 0 else (Family.ODD_MINUS, (k - 1) // 2)


def enumerate_basis(k: int, eps: str, n: int) -> list[BasisIndex]:
    if k < 0 or eps not in ("+", "-"):
        raise ArityError(f"bad colour ({k},{eps})")
    family, m = family_of(k, eps)
    labels = range(1, n + 1)
    ps = labels if family in (Family.EVEN_MINUS, Family.ODD_MINUS, Family.ZERO_MINUS) else (None,)
    qs = labels if family in (Family.EVEN_MINUS, Family.ODD_PLUS) else (None,)
    tuples = list(itertools.product(labels, repeat=m))
    return [
        BasisIndex(family, i, j, p, q)
        for p in ps
        for i in tuples
        for j in tuples
        for q in qs
    ]


@lru_cache(maxsize=None)
def _layout(family: Family, m: int) -> tuple[int, tuple[tuple[int, int], ...], tuple[int, ...], tuple[int, ...], int | None, int | None]:
    """Matching plus the intervals carrying i_t, j_t, p and q."""
    if family is Family.ZERO_MINUS:
        return 0, (), (), (), 0, None
    left = family in (Family.EVEN_MINUS, Family.ODD_MINUS)
    right = family in (Family.EVEN_MINUS, Family.ODD_PLUS)
    k = 2 * m + left + right
    off = 1 if left else 0
    chords = []
    i_iv, j_iv = [], []
    for t in range(1, m + 1):
        a, b = 2 * t - 1 + off, 2 * t + off
        chords.append((a, b))
        chords.append((2 * k + 1 - b, 2 * k + 1 - a))
        i_iv.append(a)
        j_iv.append(2 * k + 1 - b)
    if left:
        chords.append((1, 2 * k))
    if right:
        chords.append((k, k + 1))
    return k, tuple(sorted(chords)), tuple(i_iv), tuple(j_iv), (2 * k if left else None), (k if right else None)


@lru_cache(maxsize=None)
def _basis_flat(idx: BasisIndex) -> FlatDiagram:
    k, matching, i_iv, j_iv, p_iv, q_iv = _layout(idx.family, idx.m)
    eps = idx.colour.eps
    table = face_table(k, eps, matching)
    labels = [(table.address_of[t] if k else 0, l) for t, l in zip(i_iv + j_iv, idx.i + idx.j)]
    if idx.p is not None:
        labels.append((table.address_of[p_iv] if k else 0, idx.p))
    if idx.q is not None:
        labels.append((table.address_of[q_iv], idx.q))
    return FlatDiagram(k, eps, matching, tuple(sorted(labels)))


def basis_weight(idx: BasisIndex, n: int) -> Scalar:
    return sc_sqrtn_pow(idx.m, n)


def basis_diagram(idx: BasisIndex, n: int) -> Element:
    if any(not 1 <= l <= n for l in idx.labels()):
        raise ValidationError(f"labels of {idx} out of range 1..{n}")
    d = _basis_flat(idx)
    return Element(idx.colour, n, {d: basis_weight(idx, n)})


def unit_product(a: BasisIndex, b: BasisIndex, n: int) -> tuple[Scalar, BasisIndex | None]:
    """Product of two basis elements by the matrix-unit rules."""
    if a.family is not b.family or a.m != b.m:
        raise ArityError(f"cannot multiply {a} by {b}")
    if a.j != b.i or a.p != b.p or a.q != b.q:
        return Scalar(0, 0, n), None
    return Scalar(1, 0, n), BasisIndex(a.family, a.i, b.j, a.p, a.q)


def trace_value(idx: BasisIndex, n: int) -> Scalar:
    """The normalised trace of a basis element."""
    if idx.i != idx.j:
        return Scalar(0, 0, n)
    m = idx.m
    exponent = {
        Family.EVEN_PLUS: m,
        Family.EVEN_MINUS: m + 2,
        Family.ODD_PLUS: m + 1,
        Family.ODD_MINUS: m + 1,
        Family.ZERO_MINUS: 1,
    }[idx.family]
    return Scalar(1, 0, n) / Scalar(n, 0, n) ** exponent


def _basis_norm(idx: BasisIndex, n: int) -> Scalar:
    d = _basis_flat(idx)
    w = basis_weight(idx, n)
    return w * w * sphere_pairing(d, d, n)


def to_basis(x: Element) -> dict[BasisIndex, Scalar]:
    """Coordinates on the orthogonal basis: pairing(x, e) / pairing(e, e)."""
    n = x.n
    k, eps = x.colour
    out = {}
    for idx in enumerate_basis(k, eps, n):
        d = _basis_flat(idx)
        acc = Scalar(0, 0, n)
        for dx, c in x.terms.items():
            v = sphere_pairing(dx, d, n)
            if v:
                acc = acc + c * v
        if acc:
            out[idx] = acc * basis_weight(idx, n) / _basis_norm(idx, n)
    return out


def from_basis(coords: dict[BasisIndex, Scalar], colour: Colour, n: int) -> Element:
    out = Element(colour, n)
    for idx, c in sorted(coords.items()):
        out = out + basis_diagram(idx, n).scale(c)
    return out


def gram_matrix(k: int, eps: str, n: int) -> tuple[list[BasisIndex], list[list[Scalar]]]:
    """Full Gram matrix tau(e_b* e_a) on the basis of colour (k, eps).

    All basis diagrams of one colour share a matching, so the glued picture
    is computed once and only the labels vary.
    """
    basis = enumerate_basis(k, eps, n)
    if not basis:
        return basis, []
    flats = [_basis_flat(idx) for idx in basis]
    weight_sq = basis_weight(basis[0], n) ** 2
    skel = sphere_skeleton(k, eps, flats[0].matching, flats[0].matching)
    regions = [members for _, members in skel.boundary] + [members for members, _, _ in skel.interior]
    maps = [f.label_map() for f in flats]
    # per region: which face addresses of x (tag 0) and y (tag 1) feed it
    feeds = [([a for t, a in mem if t == 0], [a for t, a in mem if t == 1]) for mem in regions]
    loops = len(regions) - 1
    scale = sc_sqrtn_pow(-k, n) * weight_sq
    zero = Scalar(0, 0, n)
    minus = eps == "-"
    cache: dict[tuple[int, bool], Scalar] = {}
    rows = []
    for mx in maps:
        row = []
        for my in maps:
            ok = True
            labelled = 0
            ext_labelled = False
            for r, (xs, ys) in enumerate(feeds):
                s = set()
                for a in xs:
                    s.update(mx.get(a, ()))
                for a in ys:
                    s.update(my.get(a, ()))
                if len(s) > 1:
                    ok = False
                    break
                if s:
                    if r == 0:
                        ext_labelled = True
                    else:
                        labelled += 1
            if not ok:
                row.append(zero)
                continue
            key = (labelled, ext_labelled)
            if key not in cache:
                value = sc_sqrtn_pow(loops - 2 * labelled, n)
                if minus and ext_labelled:
                    value = value / n
                cache[key] = value * scale
            row.append(cache[key])
        rows.append(row)
    return basis, rows


def jones_projection(pos: int, k: int, eps: str, n: int) -> Element:
    if not 1 <= pos <= k - 1:
        raise ArityError(f"Jones projection position {pos} outside 1..{k - 1}")
    chords = [c for c in identity_matching(k) if c[0] not in (pos, pos + 1)]
    chords += [(pos, pos + 1), (2 * k - pos, 2 * k + 1 - pos)]
    d = FlatDiagram(k, eps, tuple(sorted(chords)))
    return Element((k, eps), n, {d: sc_sqrtn_pow(-1, n)})


def basis_iter(k: int, eps: str, n: int) -> Iterator[tuple[BasisIndex, Element]]:
    for idx in enumerate_basis(k, eps, n):
        yield idx, basis_diagram(idx, n)


# ---------------------------------------------------------------------------
# text form


def _fmt_tuple(t: tuple[int, ...]) -> str:
    return "{" + " ".join(map(str, t)) + "}"


def format_index(idx: BasisIndex) -> str:
    if idx.family is Family.ZERO_MINUS:
        return f"s({idx.p})"
    out = "e"
    if idx.p is not None:
        out += f"[{idx.p})"
    out += f"^{_fmt_tuple(idx.i)}_{_fmt_tuple(idx.j)}"
    if idx.q is not None:
        out += f"({idx.q}]"
    return out


_INDEX_RE = re.compile(
    r"^e(?:\[(?P<p>\d+)\))?\^(?:\{(?P<i>[\d ]*)\}|(?P<i1>\d))_(?:\{(?P<j>[\d ]*)\}|(?P<j1>\d))(?:\((?P<q>\d+)\])?$"
)


def parse_index(text: str) -> BasisIndex:
    s = text.strip()
    if s.startswith("e[^") and s.endswith("]"):
        # bracketed form without the p decoration: e[^1_2]
        s = "e" + s[2:-1]
    m = re.fullmatch(r"s\((\d+)\)", s)
    if m:
        return BasisIndex(Family.ZERO_MINUS, p=int(m.group(1)))
    m = _INDEX_RE.match(s)
    if m is None:
        raise ValidationError(f"malformed basis index {text!r}")
    i = tuple(int(v) for v in (m["i"] if m["i"] is not None else m["i1"]).split())
    j = tuple(int(v) for v in (m["j"] if m["j"] is not None else m["j1"]).split())
    p = int(m["p"]) if m["p"] else None
    q = int(m["q"]) if m["q"] else None
    if p is not None and q is not None:
        family = Family.EVEN_MINUS
    elif p is not None:
        family = Family.ODD_MINUS
    elif q is not None:
        family = Family.ODD_PLUS
    else:
        family = Family.EVEN_PLUS
    return BasisIndex(family, i, j, p, q)
