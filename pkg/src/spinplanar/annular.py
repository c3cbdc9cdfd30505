"""Annular tangles: closures of a single unlabelled hole down to colour (0, +/-).

An :class:`AnnularTangle` is a recipe of gluing steps applied to the hole.
Steps:

``("above", D)`` / ``("below", D)``
    stack a labelled flat diagram D of the current colour above/below.
``("inc",)``, ``("rot",)``, ``("capR",)``, ``("capL",)``, ``("trace",)``
    the elementary tangles.
``("label", t, l)``
    drop label l into the (black) region through interval t.
``("content", t, C)``
    graft the closed diagram C into the region through interval t.

A (0, eps) hole receives a closed diagram, grafted into the hole's region.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import _glue
from .diagram import (
    ClosedDiagram,
    Colour,
    FlatDiagram,
    flip,
    format_diagram,
    graft,
    random_diagram,
    skeleton_to_closed,
)
from .errors import ArityError, ValidationError

Step = tuple


def interval_black(k: int, eps: str, t: int) -> bool:
    """Shading of boundary interval t of a (k, eps) box."""
    if k == 0:
        return eps == "-"
    return (eps == "-") ^ (t % 2 == 1)


def _step_colour(colour: Colour, step: Step) -> Colour:
    k, eps = colour
    op = step[0]
    if op in ("above", "below"):
        if step[1].colour != colour:
            raise ArityError(f"cannot stack {step[1].colour} on {colour}")
        return colour
    if op == "inc":
        return Colour(k + 1, eps)
    if op == "rot":
        if k == 0:
            raise ArityError("rotation needs k >= 1")
        return Colour(k, flip(eps))
    if op == "capR":
        if k == 0:
            raise ArityError("capR needs k >= 1")
        return Colour(k - 1, eps)
    if op == "capL":
        if k == 0:
            raise ArityError("capL needs k >= 1")
        return Colour(k - 1, flip(eps))
    if op == "trace":
        return Colour(0, eps)
    if op in ("label", "content"):
        t = step[1]
        if not (k == 0 and t == 0) and not 1 <= t <= 2 * k:
            raise ArityError(f"interval {t} outside a {colour} box")
        black = interval_black(k, eps, t)
        if op == "label" and not black:
            raise ValidationError(f"label on white interval {t}")
        if op == "content" and black != (step[2].eps == "-"):
            raise ValidationError(f"content shading does not match interval {t}")
        return colour
    raise ValidationError(f"unknown step {op!r}")


@dataclass(frozen=True)
class AnnularTangle:
    hole: Colour
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hole", Colour(*self.hole))
        c = self.hole
        for s in self.steps:
            c = _step_colour(c, s)
        if c.k != 0:
            raise ArityError(f"annular tangle ends at {c}, not at k = 0")
        object.__setattr__(self, "_out", c)

    @property
    def output_eps(self) -> str:
        return self._out.eps  # type: ignore[attr-defined]

    def apply(self, x: FlatDiagram | ClosedDiagram | None = None) -> ClosedDiagram:
        """The closed diagram A(x); ``None`` fills the hole with the unit."""
        k, eps = self.hole
        if isinstance(x, ClosedDiagram):
            if k != 0 or x.eps != eps:
                raise ArityError(f"closed diagram of colour (0,{x.eps}) in a {self.hole} hole")
            inner, flat = x, FlatDiagram(0, eps, ())
        else:
            inner, flat = None, x if x is not None else FlatDiagram(k, eps, _glue_identity(k))
            if flat.colour != self.hole:
                raise ArityError(f"diagram of colour {flat.colour} in a {self.hole} hole")
        b = _glue.Builder()
        lookups: dict = {}
        box = b.piece(k, eps, flat.matching)
        lookups[0] = flat.label_map()
        grafts: list[tuple[str, ClosedDiagram]] = []
        if inner is not None:
            b.add_marker(box, 0, "hole")
            grafts.append(("hole", inner))
        for s in self.steps:
            op = s[0]
            if op in ("above", "below"):
                other = b.piece(s[1].k, s[1].eps, s[1].matching)
                lookups[other.intervals[0][0]] = s[1].label_map()
                box = b.stack(other, box) if op == "above" else b.stack(box, other)
            elif op == "inc":
                box = b.add_string_right(box)
            elif op == "rot":
                box = b.rotate(box)
            elif op == "capR":
                box = b.cap_right(box)
            elif op == "capL":
                box = b.cap_left(box)
            elif op == "trace":
                box = b.trace(box)
            elif op == "label":
                b.add_label(box, s[1], s[2])
            elif op == "content":
                key = f"c{len(grafts)}"
                b.add_marker(box, s[1], key)
                grafts.append((key, s[2]))
        skel = b.finish(box)
        closed_ = skeleton_to_closed(skel, lookups)
        if not grafts:
            return closed_
        regions = [members for _, members in skel.boundary] + [members for members, _, _ in skel.interior]
        where = {}
        for idx, members in enumerate(regions):
            for ref in members:
                if ref[0] == "marker":
                    where[ref[1]] = idx
        # grafting appends faces, so earlier region indices stay valid
        out = closed_
        for key, c in grafts:
            out = graft(out, where[key], c)
        return out

    def describe(self) -> str:
        parts = [f"hole {self.hole}"]
        for s in self.steps:
            op = s[0]
            if op in ("above", "below"):
                body = format_diagram(s[1]).replace("\n", "; ")
                parts.append(f"{op} [{body}]")
            elif op == "label":
                parts.append(f"label {s[1]}={s[2]}")
            elif op == "content":
                parts.append(f"content {s[1]} {format_closed(s[2])}")
            else:
                parts.append(op)
        return " | ".join(parts)


def _glue_identity(k: int):
    return tuple((t, 2 * k + 1 - t) for t in range(1, k + 1))


def format_closed(t: ClosedDiagram) -> str:
    faces = " ".join(
        f"{p}:{','.join(map(str, ls)) or '-'}" for p, ls in zip(t.parents, t.labels)
    )
    return f"closed {t.eps} [{faces}]"


# ---------------------------------------------------------------------------
# the six closures of a (2,+) hole


def black_channel_classes() -> list[tuple[str, AnnularTangle]]:
    """Every way of closing a (2,+) hole without further boxes, up to contents."""
    hole = Colour(2, "+")
    out = []
    for r in range(4):
        out.append((f"trace-rot{r}", AnnularTangle(hole, (("rot",),) * r + (("trace",),))))
    out.append(("capL-capR", AnnularTangle(hole, (("capR",), ("capL",)))))
    out.append(("capL-capR-rot", AnnularTangle(hole, (("rot",), ("capR",), ("capL",)))))
    return out


def with_contents(base: AnnularTangle, labels: Sequence[tuple[int, int]]) -> AnnularTangle:
    """Insert label steps right before the closing steps of a class tangle."""
    steps = list(base.steps)
    closing = next(i for i, s in enumerate(steps) if s[0] in ("trace", "capR"))
    return AnnularTangle(base.hole, tuple(steps[:closing]) + tuple(("label", t, l) for t, l in labels) + tuple(steps[closing:]))


def class_label_slots(base: AnnularTangle) -> list[int]:
    """Black intervals of the box just before the class tangle closes."""
    c = base.hole
    for s in base.steps:
        if s[0] in ("trace", "capR"):
            break
        c = _step_colour(c, s)
    return [t for t in range(1, 2 * c.k + 1) if interval_black(c.k, c.eps, t)]


# ---------------------------------------------------------------------------
# random generation


def random_closed(rng: random.Random, eps: str, n: int, max_loops: int = 4, p_label: float = 0.5, p_extra: float = 0.15) -> ClosedDiagram:
    """A random nesting of loops with labels on black faces."""
    loops = rng.randint(0, max_loops)
    parents = [-1]
    for f in range(1, loops + 1):
        parents.append(rng.randrange(f))
    probe = ClosedDiagram(eps, tuple(parents), tuple(() for _ in parents))
    labels = []
    for f in range(len(parents)):
        ls: list[int] = []
        if probe.black(f) and rng.random() < p_label:
            ls.append(rng.randint(1, n))
            while rng.random() < p_extra:
                ls.append(rng.randint(1, n))
        labels.append(tuple(sorted(ls)))
    return ClosedDiagram(eps, tuple(parents), tuple(labels))


def random_zero_hole(rng: random.Random, hole_eps: str, out_eps: str, n: int, max_loops: int = 4) -> AnnularTangle:
    """An annular tangle with a (0, hole_eps) hole and output (0, out_eps).

    Built as string insertions and caps around the hole plus grafted contents.
    """
    colour = Colour(0, hole_eps)
    steps: list[Step] = []
    for _ in range(rng.randint(0, 3)):
        steps.append(("inc",))
        colour = Colour(colour.k + 1, colour.eps)
        if rng.random() < 0.5:
            steps.append(("rot",))
            colour = Colour(colour.k, flip(colour.eps))
    steps += _random_decorations(rng, colour, n)
    steps += _close(rng, colour, out_eps, n)
    return AnnularTangle(Colour(0, hole_eps), tuple(steps))


def _random_decorations(rng: random.Random, colour: Colour, n: int) -> list[Step]:
    k, eps = colour
    steps: list[Step] = []
    slots = [0] if k == 0 else list(range(1, 2 * k + 1))
    for _ in range(rng.randint(0, 2)):
        t = rng.choice(slots)
        if interval_black(k, eps, t) and rng.random() < 0.6:
            steps.append(("label", t, rng.randint(1, n)))
        else:
            c_eps = "-" if interval_black(k, eps, t) else "+"
            steps.append(("content", t, random_closed(rng, c_eps, n, max_loops=2)))
    return steps


def _close(rng: random.Random, colour: Colour, out_eps: str, n: int) -> list[Step]:
    """Steps taking ``colour`` down to (0, out_eps)."""
    steps: list[Step] = []
    k, eps = colour
    if k == 0 and eps != out_eps:
        # wrap the picture in one loop
        return [("inc",), ("capL",)]
    while k > 0:
        # the last closing move must land on out_eps
        options = ["capR", "capL", "trace"]
        if k == 1:
            options = ["capR"] if eps == out_eps else ["capL"]
        op = rng.choice(options)
        if op == "trace":
            if eps != out_eps:
                steps.append(("rot",))
                eps = flip(eps)
            steps.append(("trace",))
            k = 0
        elif op == "capR":
            steps.append(("capR",))
            k -= 1
        else:
            steps.append(("capL",))
            k, eps = k - 1, flip(eps)
    if eps != out_eps:
        raise AssertionError("closing sequence missed the target colour")
    return steps


def random_annular(rng: random.Random, hole: Colour, n: int, out_eps: str | None = None, max_k: int = 4, length: int = 6) -> AnnularTangle:
    """A random closure of a hole of colour ``hole`` with labelled pieces."""
    colour = Colour(*hole)
    if out_eps is None:
        out_eps = rng.choice("+-")
    steps: list[Step] = []
    for _ in range(rng.randint(1, length)):
        k, eps = colour
        moves = ["above", "below", "label", "content"]
        if k < max_k:
            moves.append("inc")
        if k >= 1:
            moves += ["rot", "capR", "capL"]
        op = rng.choice(moves)
        if op in ("above", "below"):
            if k == 0:
                continue
            steps.append((op, random_diagram(rng, k, eps, n, p_label=0.5, p_extra=0.1)))
        elif op == "label":
            steps += [s for s in _random_decorations(rng, colour, n) if s[0] == "label"]
        elif op == "content":
            steps += [s for s in _random_decorations(rng, colour, n) if s[0] == "content"]
        else:
            steps.append((op,))
            colour = _step_colour(colour, (op,))
    steps += _close(rng, colour, out_eps, n)
    return AnnularTangle(Colour(*hole), tuple(steps))


def tk_tangle(k: int) -> AnnularTangle:
    """T(k): a (0,-) hole inside a black disc labelled k, in a white plane."""
    return AnnularTangle(Colour(0, "-"), (("label", 0, k), ("inc",), ("capL",)))
