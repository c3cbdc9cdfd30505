"""Partition-function functionals on closed diagrams, traces and the trace pairing.

``lambda_plus`` and ``lambda_minus`` are computed by counting faces, never by
removing loops, so they serve as an independent check on the loop removal
performed in :mod:`spinplanar.diagram`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import _glue
from .diagram import ClosedDiagram, Element, FlatDiagram, involute, skeleton_to_closed, stack, trace_close
from .errors import ArityError
from .exactnum import Scalar, sc_sqrtn_pow


@dataclass(frozen=True)
class EvalCounts:
    E: int
    N: int
    consistent: bool
    external_label: int | None


def eval_counts(t: ClosedDiagram) -> EvalCounts:
    """Unlabelled and labelled non-external faces of ``t``.

    ``external_label`` is set when the external face carries exactly one
    distinct label.
    """
    consistent = all(len(set(ls)) <= 1 for ls in t.labels)
    E = sum(1 for ls in t.labels[1:] if not ls)
    N = len(t.labels) - 1 - E
    ext = set(t.labels[0])
    return EvalCounts(E, N, consistent, next(iter(ext)) if len(ext) == 1 else None)


def lambda_plus(t: ClosedDiagram, n: int) -> Scalar:
    if t.eps != "+":
        raise ArityError("lambda_plus needs a (0,+) diagram")
    c = eval_counts(t)
    if not c.consistent:
        return Scalar(0, 0, n)
    return sc_sqrtn_pow(c.E - c.N, n)


def lambda_minus(t: ClosedDiagram, i: int, n: int) -> Scalar:
    if t.eps != "-":
        raise ArityError("lambda_minus needs a (0,-) diagram")
    c = eval_counts(t)
    if not c.consistent or any(l != i for l in t.labels[0]):
        return Scalar(0, 0, n)
    return sc_sqrtn_pow(c.E - c.N, n)


def project_0minus(t: ClosedDiagram, n: int) -> list[Scalar]:
    """Coordinates of the image of ``t`` on the basis S(1), ..., S(n)."""
    return [lambda_minus(t, i, n) for i in range(1, n + 1)]


def closed_value(t: ClosedDiagram, n: int) -> Scalar:
    """lambda_plus for (0,+); the normalised trace tr = (1/n) sum_i lambda_minus_i for (0,-)."""
    if t.eps == "+":
        return lambda_plus(t, n)
    total = sum(project_0minus(t, n), Scalar(0, 0, n))
    return total / n


def tau(x: Element) -> Scalar:
    """Normalised trace; tau of the identity is 1 in every colour."""
    n = x.n
    k = x.colour.k
    total = Scalar(0, 0, n)
    for t, c in trace_close(x):
        total = total + c * closed_value(t, n)
    return total * sc_sqrtn_pow(-k, n)


def pairing(x: Element, y: Element) -> Scalar:
    """tau(y* x)."""
    if x.colour != y.colour:
        raise ArityError(f"pairing of {x.colour} with {y.colour}")
    return tau(stack(involute(y), x))


# ---------------------------------------------------------------------------
# sphere gluing: a direct route to tau(y* x) for single diagrams


@lru_cache(maxsize=200_000)
def sphere_skeleton(k: int, eps: str, mx: tuple, my: tuple):
    """Glue two boxes point to point (x's t to y's t) into a closed picture.

    The external face is the one through x's marked interval, as for the
    trace closure of y* x.
    """
    b = _glue.Builder()
    bx = b.piece(k, eps, mx)
    by = b.piece(k, eps, my)
    for t in range(1, 2 * k + 1):
        b._join_points(bx.pt(t), by.pt(t))
    for t in range(1, 2 * k + 1):
        b._join_faces(bx.face(t), by.face(t))
    if k == 0:
        b._join_faces(bx.face(0), by.face(0))
    return b.finish(_glue.Box(0, eps, [], [bx.face(2 * k)]))


def sphere_pairing(x: FlatDiagram, y: FlatDiagram, n: int) -> Scalar:
    """tau(y* x) for two diagrams, computed without stacking or tracing."""
    if x.colour != y.colour:
        raise ArityError(f"pairing of {x.colour} with {y.colour}")
    skel = sphere_skeleton(x.k, x.eps, x.matching, y.matching)
    t = skeleton_to_closed(skel, (x.label_map(), y.label_map()))
    return closed_value(t, n) * sc_sqrtn_pow(-x.k, n)


def sphere_pairing_elements(x: Element, y: Element) -> Scalar:
    if x.colour != y.colour:
        raise ArityError(f"pairing of {x.colour} with {y.colour}")
    n = x.n
    total = Scalar(0, 0, n)
    for dx, cx in x.terms.items():
        for dy, cy in y.terms.items():
            v = sphere_pairing(dx, dy, n)
            if v:
                total = total + cx * cy * v
    return total
