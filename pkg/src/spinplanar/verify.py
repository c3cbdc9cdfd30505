"""Verification suites run by ``spinplanar verify``.

Each suite returns a list of :class:`CheckResult`. A failing result carries a
counterexample rendered in the package's text formats.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable

from . import relations
from .annular import (
    AnnularTangle,
    black_channel_classes,
    class_label_slots,
    format_closed,
    random_annular,
    random_closed,
    random_zero_hole,
    tk_tangle,
    with_contents,
)
from .basis import (
    basis_diagram,
    enumerate_basis,
    format_index,
    gram_matrix,
    jones_projection,
    to_basis,
    trace_value,
    unit_product,
)
from .diagram import (
    ClosedDiagram,
    Colour,
    Element,
    FlatDiagram,
    cap_left,
    cap_right,
    format_diagram,
    involute,
    random_element,
    resolve_loops,
    spin_diagram,
    stack,
)
from .evalfun import lambda_minus, lambda_plus, project_0minus, tau
from .exactnum import Scalar, render, sc_sqrtn_pow
from .spinmodel import (
    enumerate_loops,
    format_loop,
    iso_to_model,
    loop_encode,
    model_identity,
    model_mul,
    model_star,
    model_tau,
    spin_consistency,
)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    cases: int
    counterexample: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.suite}/{self.name} ({self.cases} cases)"


@dataclass(frozen=True)
class Settings:
    n: int
    max_k: int = 4
    seed: int = 0
    samples: int = 200
    pairs: int = 100


class _Check:
    """Accumulates cases and keeps the first counterexample."""

    def __init__(self, suite: str, name: str) -> None:
        self.suite, self.name = suite, name
        self.cases = 0
        self.failure = ""

    def case(self, ok: bool, explain: Callable[[], str]) -> None:
        self.cases += 1
        if not ok and not self.failure:
            self.failure = explain()

    def result(self) -> CheckResult:
        return CheckResult(self.suite, self.name, not self.failure, self.cases, self.failure)


def _vec(values: Iterable[Scalar]) -> str:
    return "(" + ", ".join(render(v) for v in values) + ")"


def _element_text(x: Element) -> str:
    if not x.terms:
        return f"0 in {x.colour}"
    return "\n".join(f"{render(c)} *\n{format_diagram(d)}" for d, c in x)


def _closed_text(t: ClosedDiagram) -> str:
    return format_closed(t)


def _piece_text(piece) -> str:
    if isinstance(piece, FlatDiagram):
        return format_diagram(piece).replace("\n", "; ")
    return _closed_text(piece)


def _relation_check(ch: _Check, rel: relations.Relation, closure: AnnularTangle, n: int) -> None:
    ok, lhs, rhs = relations.relation_holds(rel, closure, n)

    def explain() -> str:
        sides = "\n".join(f"  lhs term {render(c)} * {_piece_text(p)}" for c, p in rel.lhs)
        return (
            f"relation {rel.name} under closure: {closure.describe()}\n{sides}\n"
            f"  lhs value {_vec(lhs)}\n  rhs value {_vec(rhs)}"
        )

    ch.case(ok, explain)


def _zero_closures(rng: random.Random, rel: relations.Relation, n: int, count: int) -> list[AnnularTangle]:
    eps = rel.colour.eps
    out = [AnnularTangle(rel.colour, ())]
    out += [random_zero_hole(rng, eps, rng.choice("+-"), n) for _ in range(count)]
    return out


# ---------------------------------------------------------------------------
# suites


def suite_modulus(s: Settings) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/modulus")
    ch = _Check("modulus", "closures")
    rels = [relations.white_modulus(n)] + [relations.black_modulus(n, i) for i in range(1, n + 1)]
    for rel in rels:
        for A in _zero_closures(rng, rel, n, max(1, s.samples // len(rels))):
            _relation_check(ch, rel, A, n)
    out = [ch.result()]

    ch = _Check("modulus", "engine")
    root = sc_sqrtn_pow(1, n)
    cases = [
        ("capR(id(1,+))", cap_right(Element.identity(1, "+", n)), Element.identity(0, "+", n).scale(root)),
        ("capR(id(1,-))", cap_right(Element.identity(1, "-", n)), Element.identity(0, "-", n).scale(root)),
        ("capL(id(1,+))", cap_left(Element.identity(1, "+", n)), Element.identity(0, "-", n).scale(root)),
    ]
    for i in range(1, n + 1):
        labelled = Element.from_diagram(FlatDiagram(1, "+", ((1, 2),), ((1, i),)), n)
        cases.append((f"capR(labelled strand {i})", cap_right(labelled), Element.identity(0, "+", n).scale(sc_sqrtn_pow(-1, n))))
    for name, got, want in cases:
        ch.case(got == want, lambda name=name, got=got, want=want: f"{name}\n got:\n{_element_text(got)}\n want:\n{_element_text(want)}")
    sr = spin_consistency(n)
    ch.case(sr.ok, lambda: f"spin function report {sr}")
    out.append(ch.result())
    return out


def suite_multiplication(s: Settings) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/multiplication")
    ch = _Check("multiplication", "closures")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for i, j in pairs:
        rel = relations.multiplication(n, i, j)
        for A in _zero_closures(rng, rel, n, max(1, s.samples // len(pairs))):
            _relation_check(ch, rel, A, n)
    out = [ch.result()]
    ch = _Check("multiplication", "engine")
    for i, j in pairs:
        got = stack(Element.from_diagram(spin_diagram(i), n), Element.from_diagram(spin_diagram(j), n))
        want = Element.from_diagram(spin_diagram(i), n) if i == j else Element((0, "-"), n)
        ch.case(got == want, lambda got=got, i=i, j=j: f"s({i}) * s({j}) gave\n{_element_text(got)}")
    out.append(ch.result())
    return out


def suite_black_channel(s: Settings) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/black-channel")
    rel = relations.black_channel(n)
    out = []
    for name, base in black_channel_classes():
        ch = _Check("black-channel", f"class {name}")
        slots = class_label_slots(base)
        for labs in itertools.product([None] + list(range(1, n + 1)), repeat=len(slots)):
            A = with_contents(base, [(t, l) for t, l in zip(slots, labs) if l is not None])
            _relation_check(ch, rel, A, n)
        out.append(ch.result())

    ch = _Check("black-channel", "worked instance")
    A = dict(black_channel_classes())["capL-capR"]
    ok, lhs, rhs = relations.relation_holds(rel, A, n)
    root = sc_sqrtn_pow(1, n)
    ch.case(ok and all(v == root for v in lhs + rhs), lambda: f"lhs {_vec(lhs)} rhs {_vec(rhs)}, expected sqrt({n}) for every k")
    out.append(ch.result())

    ch = _Check("black-channel", "random closures")
    for _ in range(s.samples):
        _relation_check(ch, rel, random_annular(rng, Colour(2, "+"), n), n)
    out.append(ch.result())

    ch = _Check("black-channel", "basis coordinates")
    lhs = Element((2, "+"), n)
    for c, d in rel.lhs:
        lhs = lhs + Element.from_diagram(d, n, c)
    rhs = Element((2, "+"), n)
    for c, d in rel.rhs:
        rhs = rhs + Element.from_diagram(d, n, c)
    ch.case(to_basis(lhs) == to_basis(rhs), lambda: "coordinates of the two sides differ")
    out.append(ch.result())
    return out


def suite_unit(s: Settings) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/unit")
    ch = _Check("unit", "closures")
    for rel in relations.derived_relations(n):
        count = max(1, s.samples // 3)
        if rel.colour.k == 0:
            closures = _zero_closures(rng, rel, n, count)
        else:
            closures = [random_annular(rng, rel.colour, n) for _ in range(count)]
        for A in closures:
            _relation_check(ch, rel, A, n)
    out = [ch.result()]

    ch = _Check("unit", "coordinates")
    one = Scalar(1, 0, n)
    coords = to_basis(Element.identity(0, "-", n))
    want = {idx: one for idx in enumerate_basis(0, "-", n)}
    ch.case(coords == want, lambda: f"1(0,-) has coordinates {sorted((format_index(k), render(v)) for k, v in coords.items())}")
    for k in range(1, min(s.max_k, 3) + 1):
        for eps in "+-":
            ident = Element.identity(k, eps, n)
            ch.case(iso_to_model(ident) == model_identity(k, eps, n), lambda k=k, eps=eps: f"1({k},{eps}) is not the model identity")
    out.append(ch.result())
    return out


def suite_multiplicativity(s: Settings) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/multiplicativity")
    out = []
    spins = [ClosedDiagram("-", (-1,), ((i,),)) for i in range(1, n + 1)]
    for part, hole, outer in (("a", "+", "+"), ("b", "-", "+"), ("c", "+", "-"), ("d", "-", "-")):
        ch = _Check("multiplicativity", f"part {part}")
        for _ in range(s.samples):
            A = random_zero_hole(rng, hole, outer, n)
            U = random_closed(rng, hole, n)
            got = relations.evaluate_closed(A.apply(U), n)
            if hole == "+":
                factor = lambda_plus(U, n)
                want = tuple(v * factor for v in relations.evaluate_closed(A.apply(None), n))
            else:
                lam = project_0minus(U, n)
                width = 1 if outer == "+" else n
                want_l = [Scalar(0, 0, n)] * width
                for i in range(n):
                    vals = relations.evaluate_closed(A.apply(spins[i]), n)
                    want_l = [w + v * lam[i] for w, v in zip(want_l, vals)]
                want = tuple(want_l)
            ch.case(got == want, lambda A=A, U=U, got=got, want=want: f"A: {A.describe()}\nU: {_closed_text(U)}\n got {_vec(got)} want {_vec(want)}")
        out.append(ch.result())

    ch = _Check("multiplicativity", "T(k) identity")
    root = sc_sqrtn_pow(1, n)
    for _ in range(s.samples):
        U = random_closed(rng, "-", n)
        k = rng.randint(1, n)
        got = lambda_minus(U, k, n)
        want = root * lambda_plus(tk_tangle(k).apply(U), n)
        ch.case(got == want, lambda U=U, k=k, got=got, want=want: f"k={k} U: {_closed_text(U)} lambda_-,k {render(got)} vs {render(want)}")
    out.append(ch.result())

    ch = _Check("multiplicativity", "spin coordinates independence")
    for _ in range(max(1, s.samples // 4)):
        alpha = [Scalar(rng.randint(-5, 5), rng.randint(-3, 3), n) for _ in range(n)]
        for k in range(1, n + 1):
            total = Scalar(0, 0, n)
            for i in range(n):
                total = total + alpha[i] * lambda_plus(tk_tangle(k).apply(spins[i]), n)
            want = alpha[k - 1] * sc_sqrtn_pow(-1, n)
            ch.case(total == want, lambda alpha=alpha, k=k, total=total: f"alpha={_vec(alpha)} k={k} gave {render(total)}")
    out.append(ch.result())

    ch = _Check("multiplicativity", "loop removal vs counting")
    for _ in range(s.samples):
        eps = rng.choice("+-")
        t = random_closed(rng, eps, n, max_loops=6)
        resolved = resolve_loops(t, n, rng)
        direct = relations.evaluate_closed(t, n)
        if eps == "+":
            via = (resolved.terms.get(FlatDiagram(0, "+", ()), Scalar(0, 0, n)),)
        else:
            via = tuple(_coord(resolved, i, n) for i in range(1, n + 1))
        ch.case(via == direct, lambda t=t, via=via, direct=direct: f"{_closed_text(t)} removal {_vec(via)} counting {_vec(direct)}")
    out.append(ch.result())
    return out


def _coord(x: Element, i: int, n: int) -> Scalar:
    """Coefficient of S(i) once 1(0,-) is rewritten as the sum of all S(j)."""
    unit = x.terms.get(FlatDiagram(0, "-", ()), Scalar(0, 0, n))
    return unit + x.terms.get(spin_diagram(i), Scalar(0, 0, n))


def suite_traces(s: Settings, max_k: int | None = None) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/traces")
    top = s.max_k if max_k is None else max_k
    ch = _Check("traces", "basis table")
    for k in range(top + 1):
        for eps in "+-":
            for idx in enumerate_basis(k, eps, n):
                got = tau(basis_diagram(idx, n))
                want = trace_value(idx, n)
                ch.case(got == want, lambda idx=idx, got=got, want=want: f"tau({format_index(idx)}) = {render(got)}, table says {render(want)}")
    out = [ch.result()]
    ch = _Check("traces", "normalisation")
    for k in range(top + 1):
        for eps in "+-":
            v = tau(Element.identity(k, eps, n))
            ch.case(v == 1, lambda k=k, eps=eps, v=v: f"tau(1({k},{eps})) = {render(v)}")
    out.append(ch.result())
    ch = _Check("traces", "tracial")
    for _ in range(s.pairs):
        k = rng.randint(0, min(top, 4))
        eps = rng.choice("+-")
        x, y = random_element(rng, k, eps, n, 2), random_element(rng, k, eps, n, 2)
        a, b = tau(stack(x, y)), tau(stack(y, x))
        ch.case(a == b, lambda x=x, y=y, a=a, b=b: f"tau(xy) = {render(a)} but tau(yx) = {render(b)}\nx:\n{_element_text(x)}\ny:\n{_element_text(y)}")
    out.append(ch.result())
    return out


def suite_gram(s: Settings, jones_k: int | None = None) -> list[CheckResult]:
    n = s.n
    out = []
    ch = _Check("gram", "dimensions")
    for k in range(s.max_k + 1):
        for eps in "+-":
            size = len(enumerate_basis(k, eps, n))
            want = n if (k, eps) == (0, "-") else n**k
            ch.case(size == want, lambda k=k, eps=eps, size=size: f"|B({k},{eps})| = {size}")
    out.append(ch.result())
    ch = _Check("gram", "diagonal and positive")
    for k in range(s.max_k + 1):
        for eps in "+-":
            basis, G = gram_matrix(k, eps, n)
            for a, row in enumerate(G):
                for b, v in enumerate(row):
                    ok = v > 0 if a == b else not v
                    ch.case(ok, lambda a=a, b=b, v=v, basis=basis: f"gram[{format_index(basis[a])}, {format_index(basis[b])}] = {render(v)}")
    out.append(ch.result())
    ch = _Check("gram", "jones projections")
    inv_n = Scalar(1, 0, n) / n
    top = s.max_k if jones_k is None else jones_k
    for k in range(2, top + 1):
        for eps in "+-":
            for pos in range(1, k):
                e = jones_projection(pos, k, eps, n)
                ch.case(stack(e, e) == e, lambda pos=pos, k=k, eps=eps: f"E({k},{eps},{pos}) is not idempotent")
                for other in (pos - 1, pos + 1):
                    if 1 <= other < k:
                        f = jones_projection(other, k, eps, n)
                        got = stack(e, stack(f, e))
                        ch.case(got == e.scale(inv_n), lambda pos=pos, other=other, k=k, eps=eps: f"E{pos} E{other} E{pos} != E{pos}/n in ({k},{eps})")
    out.append(ch.result())
    return out


def suite_iso(s: Settings, unit_k: int | None = None) -> list[CheckResult]:
    n, rng = s.n, random.Random(f"{s.seed}/iso")
    out = []
    top_units = s.max_k if unit_k is None else unit_k
    ch = _Check("iso", "matrix units by stacking")
    for k in range(top_units + 1):
        for eps in "+-":
            basis = enumerate_basis(k, eps, n)
            els = {b: basis_diagram(b, n) for b in basis}
            for a in basis:
                for b in basis:
                    c, r = unit_product(a, b, n)
                    got = stack(els[a], els[b])
                    want = els[r].scale(c) if r is not None else Element((k, eps), n)
                    ch.case(got == want, lambda a=a, b=b, got=got: f"{format_index(a)} * {format_index(b)} stacked to\n{_element_text(got)}")
    out.append(ch.result())

    ch = _Check("iso", "loops")
    for k in range(s.max_k + 1):
        for eps in "+-":
            basis = enumerate_basis(k, eps, n)
            loops = [loop_encode(b) for b in basis]
            brute = enumerate_loops(k, eps, n)
            ch.case(sorted(map(format_loop, loops)) == sorted(map(format_loop, brute)), lambda k=k, eps=eps: f"loop bijection fails in ({k},{eps})")
    for i in range(1, n + 1):
        m = iso_to_model(Element.from_diagram(spin_diagram(i), n))
        ok = len(m.coeffs) == 1 and [format_loop(loop_encode(k)) for k in m.coeffs] == [f"v{i}"] and list(m.coeffs.values()) == [1]
        ch.case(ok, lambda i=i: f"s({i}) does not map to the length-0 loop at v{i}")
    out.append(ch.result())

    ch = _Check("iso", "bijective on bases")
    for k in range(s.max_k + 1):
        for eps in "+-":
            for idx in enumerate_basis(k, eps, n):
                m = iso_to_model(basis_diagram(idx, n))
                ch.case(m.coeffs == {idx: Scalar(1, 0, n)}, lambda idx=idx, m=m: f"{format_index(idx)} maps to {sorted(map(format_index, m.coeffs))}")
    out.append(ch.result())

    ch = _Check("iso", "homomorphism")
    top = min(s.max_k, 4)
    for k in range(top + 1):
        for eps in "+-":
            for _ in range(s.pairs):
                x, y = random_element(rng, k, eps, n, 2), random_element(rng, k, eps, n, 2)
                ix, iy = iso_to_model(x), iso_to_model(y)
                fails = []
                if iso_to_model(stack(x, y)) != model_mul(ix, iy):
                    fails.append("multiplicative")
                if iso_to_model(involute(x)) != model_star(ix):
                    fails.append("star")
                if tau(x) != model_tau(ix):
                    fails.append("trace")
                ch.case(not fails, lambda x=x, y=y, fails=fails: f"not {', '.join(fails)} on\nx:\n{_element_text(x)}\ny:\n{_element_text(y)}")
    out.append(ch.result())
    return out


SUITES: dict[str, Callable[[Settings], list[CheckResult]]] = {
    "modulus": suite_modulus,
    "multiplication": suite_multiplication,
    "black-channel": suite_black_channel,
    "unit": suite_unit,
    "multiplicativity": suite_multiplicativity,
    "traces": suite_traces,
    "gram": suite_gram,
    "iso": suite_iso,
}


def run(names: Iterable[str], settings: Settings) -> list[CheckResult]:
    out: list[CheckResult] = []
    for name in names:
        out += SUITES[name](settings)
    return out
