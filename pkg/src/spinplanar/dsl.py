"""Expression language over the generators.

    expr   := ['-'] term (('+' | '-') term)*
    term   := [scalar '*'] factor ('*' factor)*
    factor := 's(' int ')' | 'id(' int ',' sign ')' | 'E(' int ',' sign ',' int ')'
            | basis literal | op '(' expr ')' | '(' expr ')'
    scalar := rational [('+' | '-') rational '*' 'sqrtn'] | [rational '*'] 'sqrtn'
    op     := inc | capL | capR | rot | star | tr | expand

Basis literals: ``e^{1 2}_{2 1}``, ``e[p)^{i}_{j}(q]``, ``e^1_2`` and ``s(i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .basis import BasisIndex, basis_diagram, format_index, jones_projection, parse_index
from .diagram import (
    Colour,
    Element,
    add_string_right,
    cap_left,
    cap_right,
    expand_units,
    involute,
    rotate_one,
    spin_diagram,
    stack,
)
from .errors import ArityError, SpinPlanarError, ValidationError
from .evalfun import tau
from .exactnum import Scalar

OPS = ("inc", "capL", "capR", "rot", "star", "tr", "expand")


class DSLError(SpinPlanarError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None) -> None:
        if pos is not None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"{message} at line {line}, column {col}"
        super().__init__(message)
        self.pos = pos


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Gen:
    label: int


@dataclass(frozen=True)
class Unit:
    k: int
    eps: str


@dataclass(frozen=True)
class Jones:
    k: int
    eps: str
    pos: int


@dataclass(frozen=True)
class BasisLit:
    index: BasisIndex


@dataclass(frozen=True)
class Lit:
    a: Fraction
    b: Fraction = Fraction(0)

    def value(self, n: int) -> Scalar:
        return Scalar(self.a, self.b, n)


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Node"


@dataclass(frozen=True)
class Prod:
    scalar: Lit | None
    factors: tuple["Node", ...]


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[str, "Node"], ...]


Node = Union[Gen, Unit, Jones, BasisLit, Lit, Unary, Prod, Sum]


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<basis>e\[\^[^\]]*\]|e(?:\[\d+\))?\^(?:\{[\d\s]*\}|\d)_(?:\{[\d\s]*\}|\d)(?:\(\d+\])?)
  | (?P<rational>\d+(?:/\d+)?)
  | (?P<name>sqrtn|inc|capL|capR|rot|star|tr|expand|id|s|E)
  | (?P<punct>[-+*(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "punct":
                kind = m.group()
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def take(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise DSLError(f"expected {want}, found {got}", self.text, tok.pos)
        self.i += 1
        return tok

    def fail(self, what: str) -> DSLError:
        tok = self.peek()
        got = "end of input" if tok.kind == "end" else repr(tok.text)
        return DSLError(f"expected {what}, found {got}", self.text, tok.pos)

    # grammar ---------------------------------------------------------------
    def expr(self) -> Node:
        terms = []
        sign = "+"
        if self.peek().kind == "-":
            self.i += 1
            sign = "-"
        terms.append((sign, self.term()))
        while self.peek().kind in ("+", "-"):
            sign = self.take(self.peek().kind).kind
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == "+":
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self) -> Node:
        scalar = self.scalar_prefix()
        factors = [self.factor()]
        while self.peek().kind == "*":
            self.i += 1
            factors.append(self.factor())
        if scalar is None and len(factors) == 1:
            return factors[0]
        return Prod(scalar, tuple(factors))

    def _rational(self) -> Fraction:
        return Fraction(self.take("rational").text)

    def scalar_prefix(self) -> Lit | None:
        """A scalar followed by '*', or None (position unchanged)."""
        start = self.i
        for attempt in (self._scalar_full, self._scalar_simple):
            self.i = start
            try:
                lit = attempt()
                if self.peek().kind == "*":
                    self.i += 1
                    return lit
            except DSLError:
                pass
        self.i = start
        return None

    def _scalar_full(self) -> Lit:
        a = self._rational()
        sign = self.peek().kind
        if sign not in ("+", "-"):
            raise self.fail("'+' or '-'")
        self.i += 1
        b = self._rational()
        self.take("*")
        if self.peek().text != "sqrtn":
            raise self.fail("'sqrtn'")
        self.i += 1
        return Lit(a, b if sign == "+" else -b)

    def _scalar_simple(self) -> Lit:
        if self.peek().text == "sqrtn":
            self.i += 1
            return Lit(Fraction(0), Fraction(1))
        a = self._rational()
        if self.peek().kind == "*" and self.peek(1).text == "sqrtn":
            self.i += 2
            return Lit(Fraction(0), a)
        return Lit(a)

    def _int(self) -> int:
        tok = self.take("rational")
        if "/" in tok.text:
            raise DSLError("expected an integer", self.text, tok.pos)
        return int(tok.text)

    def _sign(self) -> str:
        tok = self.peek()
        if tok.kind not in ("+", "-"):
            raise self.fail("'+' or '-'")
        self.i += 1
        return tok.kind

    def factor(self) -> Node:
        tok = self.peek()
        if tok.kind == "basis":
            self.i += 1
            try:
                return BasisLit(parse_index(tok.text))
            except ValidationError as exc:
                raise DSLError(str(exc), self.text, tok.pos) from None
        if tok.kind == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        if tok.kind == "name":
            name = tok.text
            self.i += 1
            if name == "s":
                self.take("(")
                label = self._int()
                self.take(")")
                return Gen(label)
            if name == "id":
                self.take("(")
                k = self._int()
                self.take(",")
                eps = self._sign()
                self.take(")")
                return Unit(k, eps)
            if name == "E":
                self.take("(")
                k = self._int()
                self.take(",")
                eps = self._sign()
                self.take(",")
                pos = self._int()
                self.take(")")
                return Jones(k, eps, pos)
            if name in OPS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Unary(name, arg)
            self.i -= 1
        raise self.fail("a factor")


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    p.take("end")
    return node


# ---------------------------------------------------------------------------
# printing


def _frac(x: Fraction) -> str:
    return str(x)


def format_lit(lit: Lit) -> str:
    if not lit.b:
        return _frac(lit.a)
    if not lit.a and lit.b > 0:
        return "sqrtn" if lit.b == 1 else f"{_frac(lit.b)}*sqrtn"
    sign = "+" if lit.b > 0 else "-"
    return f"{_frac(lit.a)} {sign} {_frac(abs(lit.b))}*sqrtn"


def to_text(node: Node) -> str:
    if isinstance(node, Gen):
        return f"s({node.label})"
    if isinstance(node, Unit):
        return f"id({node.k},{node.eps})"
    if isinstance(node, Jones):
        return f"E({node.k},{node.eps},{node.pos})"
    if isinstance(node, BasisLit):
        return format_index(node.index)
    if isinstance(node, Unary):
        return f"{node.op}({to_text(node.arg)})"
    if isinstance(node, Prod):
        parts = [f"{format_lit(node.scalar)}" if node.scalar else None]
        parts += [_wrap(f, (Sum, Prod)) for f in node.factors]
        return " * ".join(p for p in parts if p is not None)
    if isinstance(node, Sum):
        out = []
        for idx, (sign, t) in enumerate(node.terms):
            body = _wrap(t, (Sum,))
            if idx == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)
    if isinstance(node, Lit):
        raise DSLError("a bare scalar is not an expression")
    raise TypeError(node)


def _wrap(node: Node, kinds: tuple) -> str:
    text = to_text(node)
    return f"({text})" if isinstance(node, kinds) else text


# ---------------------------------------------------------------------------
# types and evaluation

SCALAR = "scalar"
Type = Union[Colour, str]


def _type_name(t: Type) -> str:
    return "scalar" if t == SCALAR else str(t)


def typecheck(node: Node, n: int) -> Type:
    """Infer the colour (or scalar type) of ``node``; raises on mismatches."""

    def err(msg: str) -> DSLError:
        return DSLError(f"{msg} in {to_text(node)!r}")

    if isinstance(node, Gen):
        if not 1 <= node.label <= n:
            raise err(f"label {node.label} outside 1..{n}")
        return Colour(0, "-")
    if isinstance(node, Unit):
        return Colour(node.k, node.eps)
    if isinstance(node, Jones):
        if not 1 <= node.pos <= node.k - 1:
            raise err(f"Jones position {node.pos} outside 1..{node.k - 1}")
        return Colour(node.k, node.eps)
    if isinstance(node, BasisLit):
        if any(not 1 <= l <= n for l in node.index.labels()):
            raise err(f"labels outside 1..{n}")
        return node.index.colour
    if isinstance(node, Lit):
        return SCALAR
    if isinstance(node, Unary):
        t = typecheck(node.arg, n)
        if t == SCALAR:
            raise err(f"{node.op} applied to a scalar")
        k, eps = t
        flip = "-" if eps == "+" else "+"
        if node.op in ("capL", "capR", "rot") and k == 0:
            raise err(f"{node.op} needs k >= 1, got {t}")
        return {
            "inc": Colour(k + 1, eps),
            "capL": Colour(k - 1, flip),
            "capR": Colour(k - 1, eps),
            "rot": Colour(k, flip),
            "star": t,
            "expand": t,
            "tr": SCALAR,
        }[node.op]
    if isinstance(node, Prod):
        colour: Type = SCALAR
        for f in node.factors:
            t = typecheck(f, n)
            if t == SCALAR:
                continue
            if colour != SCALAR and colour != t:
                raise err(f"product of {_type_name(colour)} and {_type_name(t)}")
            colour = t
        return colour
    if isinstance(node, Sum):
        types = {typecheck(t, n) for _, t in node.terms}
        if len(types) != 1:
            raise err("sum of " + " and ".join(sorted(map(_type_name, types))))
        return types.pop()
    raise TypeError(node)


def evaluate(node: Node | str, n: int) -> Element | Scalar:
    if isinstance(node, str):
        node = parse(node)
    typecheck(node, n)
    return _eval(node, n)


def _eval(node: Node, n: int) -> Element | Scalar:
    if isinstance(node, Gen):
        return Element.from_diagram(spin_diagram(node.label), n)
    if isinstance(node, Unit):
        return Element.identity(node.k, node.eps, n)
    if isinstance(node, Jones):
        return jones_projection(node.pos, node.k, node.eps, n)
    if isinstance(node, BasisLit):
        return basis_diagram(node.index, n)
    if isinstance(node, Lit):
        return node.value(n)
    if isinstance(node, Unary):
        x = _eval(node.arg, n)
        assert isinstance(x, Element)
        fn = {
            "inc": add_string_right,
            "capL": cap_left,
            "capR": cap_right,
            "rot": rotate_one,
            "star": involute,
            "expand": expand_units,
            "tr": tau,
        }[node.op]
        return fn(x)
    if isinstance(node, Prod):
        acc: Element | Scalar = node.scalar.value(n) if node.scalar else Scalar(1, 0, n)
        for f in node.factors:
            v = _eval(f, n)
            if isinstance(acc, Element) and isinstance(v, Element):
                acc = stack(acc, v)
            elif isinstance(acc, Element):
                acc = acc.scale(v)
            elif isinstance(v, Element):
                acc = v.scale(acc)
            else:
                acc = acc * v
        return acc
    if isinstance(node, Sum):
        total = None
        for sign, t in node.terms:
            v = _eval(t, n)
            if sign == "-":
                v = -v
            total = v if total is None else total + v
        return total
    raise ArityError(f"cannot evaluate {node!r}")
