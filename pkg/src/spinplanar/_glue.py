"""Combinatorial gluing of shaded chord diagrams.

Every tangle operation in the package (stacking, caps, string insertion,
rotation, reflection, trace closure) is expressed as a sequence of steps on a
:class:`Builder`. The builder keeps chords between point references and a
union-find over face references; :meth:`Builder.finish` traces the strands,
finds closed loops, merges faces and returns a :class:`Skeleton`. Skeletons
depend only on the matchings involved, never on labels, so they are cached
by the callers and labels are applied afterwards.

Boundary conventions: a box of colour (k, eps) has points 1..2k placed
clockwise, 1..k along the top left to right and k+1..2k along the bottom
right to left. Interval t lies between point t and point t+1; interval 2k
(between 2k and 1) is the marked one. For k == 0 the single interval is 0.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Sequence

from .errors import ValidationError

Matching = tuple[tuple[int, int], ...]
FaceRef = Hashable
PointRef = Hashable


def interval(t: int, k: int) -> int:
    """Normalise an interval index into 1..2k (0 when k == 0)."""
    if k == 0:
        return 0
    return (t - 1) % (2 * k) + 1


def partner_array(k: int, matching: Matching) -> list[int]:
    partner = [0] * (2 * k + 1)
    seen = set()
    for a, b in matching:
        if not (1 <= a <= 2 * k and 1 <= b <= 2 * k) or a == b:
            raise ValidationError(f"bad chord ({a},{b}) for k={k}")
        if a in seen or b in seen:
            raise ValidationError(f"point reused in matching {matching}")
        seen.update((a, b))
        partner[a], partner[b] = b, a
    if len(seen) != 2 * k:
        raise ValidationError(f"matching {matching} is not perfect on {2 * k} points")
    return partner


def check_noncrossing(matching: Matching) -> None:
    chords = [tuple(sorted(c)) for c in matching]
    for (a, b), (c, d) in itertools.combinations(chords, 2):
        if a < c < b < d or c < a < d < b:
            raise ValidationError(f"chords ({a},{b}) and ({c},{d}) cross")


@dataclass(frozen=True)
class FaceTable:
    """Faces of a loop-free chord diagram.

    ``address_of[t]`` is the address of the face touching interval t (index 0
    is used for k == 0); ``faces`` lists ``(address, black, intervals)``.
    """

    address_of: tuple[int, ...]
    faces: tuple[tuple[int, bool, tuple[int, ...]], ...]

    def black(self, address: int) -> bool:
        for a, black, _ in self.faces:
            if a == address:
                return black
        raise ValidationError(f"no face with address {address}")


@lru_cache(maxsize=None)
def face_table(k: int, eps: str, matching: Matching) -> FaceTable:
    marked_black = eps == "-"
    if k == 0:
        return FaceTable((0,), ((0, marked_black, (0,)),))
    partner = partner_array(k, matching)
    check_noncrossing(matching)
    owner = [0] * (2 * k + 1)
    faces = []
    for start in range(1, 2 * k + 1):
        if owner[start]:
            continue
        members = []
        t = start
        while not owner[t]:
            owner[t] = start
            members.append(t)
            t = partner[interval(t + 1, k)]
        if t != start:
            raise ValidationError(f"face tracing did not close for {matching}")
        # interval t has the marked colour flipped t times
        black = marked_black ^ (start % 2 == 1)
        if any((marked_black ^ (m % 2 == 1)) != black for m in members):
            raise ValidationError(f"inconsistent shading in {matching}")
        faces.append((start, black, tuple(sorted(members))))
    address_of = [0] * (2 * k + 1)
    for t in range(1, 2 * k + 1):
        address_of[t] = owner[t]
    return FaceTable(tuple(address_of), tuple(faces))


@dataclass(frozen=True)
class Skeleton:
    """Label-free result of a gluing.

    ``boundary`` maps each face address of the output diagram to the input
    faces merged into it. ``interior`` lists faces cut off from the boundary
    by closed loops, parents before children; each entry is
    ``(members, black, parent)`` where ``parent`` is ``("b", address)`` for a
    boundary face or ``("i", index)`` for another interior face. Each
    interior face corresponds to exactly one loop, its outer boundary.
    """

    k: int
    eps: str
    matching: Matching
    boundary: tuple[tuple[int, tuple[FaceRef, ...]], ...]
    interior: tuple[tuple[tuple[FaceRef, ...], bool, tuple[str, int]], ...]
    fixed_labels: tuple[tuple[FaceRef, tuple[int, ...]], ...] = ()


class Box:
    """Current boundary of a partially built picture."""

    __slots__ = ("k", "eps", "points", "intervals")

    def __init__(self, k: int, eps: str, points: list, intervals: list) -> None:
        self.k = k
        self.eps = eps
        self.points = points
        self.intervals = intervals

    def pt(self, t: int) -> PointRef:
        return self.points[t - 1]

    def face(self, t: int) -> FaceRef:
        if self.k == 0:
            return self.intervals[0]
        return self.intervals[interval(t, self.k) - 1]


def _flip(eps: str) -> str:
    return "-" if eps == "+" else "+"


class Builder:
    def __init__(self) -> None:
        self._point_parent: dict = {}
        self._face_parent: dict = {}
        self._face_black: dict = {}
        self._labels: dict = defaultdict(list)
        self._chords: list = []
        self._tags = itertools.count()

    # union-find -----------------------------------------------------------
    def _find_point(self, p):
        parent = self._point_parent
        root = p
        while parent[root] != root:
            root = parent[root]
        while parent[p] != root:
            parent[p], p = root, parent[p]
        return root

    def _find_face(self, f):
        parent = self._face_parent
        root = f
        while parent[root] != root:
            root = parent[root]
        while parent[f] != root:
            parent[f], f = root, parent[f]
        return root

    def _new_point(self, p) -> None:
        self._point_parent[p] = p

    def _new_face(self, f, black: bool) -> None:
        self._face_parent[f] = f
        self._face_black[f] = black

    def _join_points(self, p, q) -> None:
        rp, rq = self._find_point(p), self._find_point(q)
        if rp != rq:
            self._point_parent[rq] = rp

    def _join_faces(self, f, g) -> None:
        rf, rg = self._find_face(f), self._find_face(g)
        if rf == rg:
            return
        if self._face_black[rf] != self._face_black[rg]:
            raise ValidationError(f"gluing faces of opposite shading: {f} and {g}")
        self._face_parent[rg] = rf

    # pieces ---------------------------------------------------------------
    def piece(self, k: int, eps: str, matching: Matching, labels: Sequence[tuple[int, int]] = ()) -> Box:
        """Add a chord diagram; its faces are referenced as ``(tag, address)``."""
        tag = next(self._tags)
        table = face_table(k, eps, matching)
        for address, black, _ in table.faces:
            self._new_face((tag, address), black)
        for address, label in labels:
            if not table.black(address):
                raise ValidationError(f"label {label} on white face {address}")
            self._labels[(tag, address)].append(label)
        points = [(tag, t) for t in range(1, 2 * k + 1)]
        for p in points:
            self._new_point(p)
        for a, b in matching:
            self._chords.append(((tag, a), (tag, b), (tag, table.address_of[a]), (tag, table.address_of[b])))
        if k == 0:
            intervals = [(tag, 0)]
        else:
            intervals = [(tag, table.address_of[t]) for t in range(1, 2 * k + 1)]
        return Box(k, eps, points, intervals)

    def add_label(self, box: Box, t: int, label: int) -> None:
        f = box.face(t)
        if not self._face_black[self._find_face(f)]:
            raise ValidationError(f"label {label} on white interval {t}")
        self._labels[("fixed", f)].append(label)
        if ("fixed", f) not in self._face_parent:
            self._new_face(("fixed", f), True)
        self._join_faces(f, ("fixed", f))

    def add_marker(self, box: Box, t: int, key: Hashable) -> None:
        """Tag the region through interval t so it can be found after finishing."""
        f = box.face(t)
        ref = ("marker", key)
        self._new_face(ref, self._face_black[self._find_face(f)])
        self._join_faces(f, ref)

    # operations -----------------------------------------------------------
    def stack(self, upper: Box, lower: Box) -> Box:
        if (upper.k, upper.eps) != (lower.k, lower.eps):
            raise ValidationError("stacking boxes of different colours")
        k = upper.k
        for t in range(k + 1, 2 * k + 1):
            self._join_points(upper.pt(t), lower.pt(2 * k + 1 - t))
        for t in range(k + 1, 2 * k):
            self._join_faces(upper.face(t), lower.face(2 * k - t))
        self._join_faces(upper.face(k), lower.face(k))
        self._join_faces(upper.face(2 * k), lower.face(2 * k))
        if k == 0:
            return Box(0, upper.eps, [], [upper.face(0)])
        points = upper.points[:k] + lower.points[k:]
        intervals = [upper.face(t) for t in range(1, k + 1)]
        intervals += [lower.face(t) for t in range(k + 1, 2 * k)]
        intervals.append(upper.face(2 * k))
        return Box(k, upper.eps, points, intervals)

    def cap_right(self, box: Box) -> Box:
        k = box.k
        if k == 0:
            raise ValidationError("cap_right on a (0, eps) box")
        self._chords.append((box.pt(k), box.pt(k + 1), box.face(k), box.face(k - 1)))
        self._join_faces(box.face(k - 1), box.face(k + 1))
        points = box.points[: k - 1] + box.points[k + 1:]
        if k == 1:
            return Box(0, box.eps, points, [box.face(2)])
        intervals = [box.face(t) for t in range(1, k)]
        intervals += [box.face(t + 2) for t in range(k, 2 * k - 1)]
        return Box(k - 1, box.eps, points, intervals)

    def cap_left(self, box: Box) -> Box:
        k = box.k
        if k == 0:
            raise ValidationError("cap_left on a (0, eps) box")
        self._chords.append((box.pt(1), box.pt(2 * k), box.face(2 * k), box.face(1)))
        self._join_faces(box.face(1), box.face(2 * k - 1))
        points = box.points[1: 2 * k - 1]
        if k == 1:
            return Box(0, _flip(box.eps), points, [box.face(1)])
        intervals = [box.face(t + 1) for t in range(1, 2 * k - 2)]
        intervals.append(box.face(1))
        return Box(k - 1, _flip(box.eps), points, intervals)

    def add_string_right(self, box: Box) -> Box:
        k = box.k
        tag = next(self._tags)
        top, bottom, new_face = (tag, "top"), (tag, "bottom"), (tag, "face")
        self._new_point(top)
        self._new_point(bottom)
        old_right = box.face(k)
        self._new_face(new_face, not self._face_black[self._find_face(old_right)])
        self._chords.append((top, bottom, old_right, new_face))
        points = box.points[:k] + [top, bottom] + box.points[k:]
        if k == 0:
            return Box(1, box.eps, points, [new_face, box.face(0)])
        intervals = [box.face(t) for t in range(1, k + 1)]
        intervals += [new_face, old_right]
        intervals += [box.face(t - 2) for t in range(k + 3, 2 * k + 3)]
        return Box(k + 1, box.eps, points, intervals)

    def rotate(self, box: Box) -> Box:
        k = box.k
        if k == 0:
            raise ValidationError("rotation of a (0, eps) box")
        points = box.points[1:] + box.points[:1]
        intervals = [box.face(t + 1) for t in range(1, 2 * k)] + [box.face(1)]
        return Box(k, _flip(box.eps), points, intervals)

    def reflect(self, box: Box) -> Box:
        k = box.k
        if k == 0:
            return Box(0, box.eps, [], list(box.intervals))
        points = box.points[::-1]
        intervals = [box.face(2 * k - t) for t in range(1, 2 * k)] + [box.face(2 * k)]
        return Box(k, box.eps, points, intervals)

    def trace(self, box: Box) -> Box:
        k = box.k
        for j in range(1, k + 1):
            outer = box.face(2 * k) if j == 1 else box.face(j - 1)
            self._chords.append((box.pt(j), box.pt(2 * k + 1 - j), box.face(j), outer))
        for j in range(1, k):
            self._join_faces(box.face(j), box.face(2 * k - j))
        return Box(0, box.eps, [], [box.face(2 * k)])

    # finishing ------------------------------------------------------------
    def finish(self, box: Box) -> Skeleton:
        find_p, find_f = self._find_point, self._find_face
        chords = self._chords
        at: dict = defaultdict(list)
        for c, (p, q, _, _) in enumerate(chords):
            at[find_p(p)].append(c)
            at[find_p(q)].append(c)
        boundary_index = {}
        for t, p in enumerate(box.points, 1):
            cls = find_p(p)
            if len(at[cls]) != 1:
                raise ValidationError(f"boundary point {t} has {len(at[cls])} strands")
            boundary_index[cls] = t
        for cls, cs in at.items():
            if cls not in boundary_index and len(cs) != 2:
                raise ValidationError(f"interior point meets {len(cs)} strands")

        used = [False] * len(chords)

        def walk(c: int, entry):
            # follow the strand through chord c, entered at point class `entry`;
            # returns the boundary class reached, or None when a loop closes
            while True:
                used[c] = True
                p, q = find_p(chords[c][0]), find_p(chords[c][1])
                exit_ = q if p == entry else p
                if exit_ in boundary_index:
                    return exit_
                a, b = at[exit_]
                nxt = b if a == c else a
                if used[nxt]:
                    return None
                c, entry = nxt, exit_

        pairs = []
        for t, p in enumerate(box.points, 1):
            cls = find_p(p)
            c = at[cls][0]
            if used[c]:
                continue
            end = walk(c, cls)
            pairs.append(tuple(sorted((t, boundary_index[end]))))
        matching: Matching = tuple(sorted(pairs))

        loops = []
        for c in range(len(chords)):
            if not used[c]:
                start = find_p(chords[c][0])
                walk(c, start)
                loops.append((find_f(chords[c][2]), find_f(chords[c][3])))

        table = face_table(box.k, box.eps, matching)
        comp_of_address = {}
        for address, _, ivs in table.faces:
            comps = {find_f(box.intervals[0] if box.k == 0 else box.intervals[t - 1]) for t in ivs}
            if len(comps) != 1:
                raise ValidationError("output face is split between regions")
            comp_of_address[address] = comps.pop()
        if len(set(comp_of_address.values())) != len(comp_of_address):
            raise ValidationError("distinct output faces share a region")

        members: dict = defaultdict(list)
        for f in self._face_parent:
            members[find_f(f)].append(f)

        adjacency: dict = defaultdict(list)
        for a, b in loops:
            if a == b:
                raise ValidationError("loop with the same region on both sides")
            adjacency[a].append(b)
            adjacency[b].append(a)
        where = {comp: ("b", address) for address, comp in comp_of_address.items()}
        interior = []
        queue = deque(comp_of_address[a] for a in sorted(comp_of_address))
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if v in where:
                    continue
                where[v] = ("i", len(interior))
                interior.append((v, where[u]))
                queue.append(v)
        if len(interior) != len(loops) or len(where) != len(members):
            raise ValidationError("loop/region structure is not a forest")

        def member_refs(comp):
            return tuple(sorted((m for m in members[comp] if self._is_labelled_kind(m)), key=repr))

        fixed = tuple(sorted(((f, tuple(ls)) for f, ls in self._labels.items() if f and f[0] == "fixed"), key=repr))
        return Skeleton(
            k=box.k,
            eps=box.eps,
            matching=matching,
            boundary=tuple((a, member_refs(comp_of_address[a])) for a in sorted(comp_of_address)),
            interior=tuple((member_refs(v), self._face_black[v], parent) for v, parent in interior),
            fixed_labels=fixed,
        )

    def _is_labelled_kind(self, f) -> bool:
        # piece faces (tag, int), fixed-label faces and markers are reported
        return (isinstance(f[1], int) and isinstance(f[0], int)) or f[0] in ("fixed", "marker")

