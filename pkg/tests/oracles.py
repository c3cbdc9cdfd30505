"""Independent reference computations used only by the tests.

Nothing here imports the engine's gluing code: faces and Temperley-Lieb
composition are recomputed from scratch with a union-find.
"""

from __future__ import annotations


class UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        self.parent[self.find(a)] = self.find(b)


def partner_map(matching) -> dict[int, int]:
    out = {}
    for a, b in matching:
        out[a], out[b] = b, a
    return out


def faces_by_tracing(k: int, eps: str, matching) -> dict[int, tuple[bool, tuple[int, ...]]]:
    """address -> (black, intervals); interval t sits between points t and t+1."""
    if k == 0:
        return {0: (eps == "-", (0,))}
    partner = partner_map(matching)
    uf = UnionFind()
    for t in range(1, 2 * k + 1):
        uf.find(t)
        # walking along the face from interval t: next point is t+1, cross its chord
        nxt = t % (2 * k) + 1
        uf.union(t, partner[nxt])
    groups: dict = {}
    for t in range(1, 2 * k + 1):
        groups.setdefault(uf.find(t), []).append(t)
    out = {}
    for members in groups.values():
        members.sort()
        black = (eps == "-") ^ (members[0] % 2 == 1)
        out[members[0]] = (black, tuple(members))
    return out


def tl_compose(k: int, upper, lower) -> tuple[tuple[tuple[int, int], ...], int]:
    """Stack two unlabelled matchings: upper's point t meets lower's point 2k+1-t.

    Returns (matching of the result, number of closed loops).
    """
    uf = UnionFind()
    for a, b in upper:
        uf.union(("u", a), ("u", b))
    for a, b in lower:
        uf.union(("l", a), ("l", b))
    for t in range(k + 1, 2 * k + 1):
        uf.union(("u", t), ("l", 2 * k + 1 - t))
    ends = [("u", t) for t in range(1, k + 1)] + [("l", t) for t in range(k + 1, 2 * k + 1)]
    by_root: dict = {}
    for e in ends:
        by_root.setdefault(uf.find(e), []).append(e[1])
    matching = tuple(sorted(tuple(sorted(v)) for v in by_root.values()))
    roots = {uf.find(("u", p)) for p in range(1, 2 * k + 1)} | {uf.find(("l", p)) for p in range(1, 2 * k + 1)}
    loops = len(roots) - len(by_root)
    return matching, loops
