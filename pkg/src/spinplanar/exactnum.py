"""Exact arithmetic in Q(sqrt n).

A :class:`Scalar` is ``a + b*sqrt(n)`` with rational ``a`` and ``b``. When ``n``
is a perfect square the irrational part is folded into ``a`` so that equality
of the stored fields is equality of values.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import ConfigError

Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def _square_root(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


class Scalar:
    __slots__ = ("_a", "_b", "_n")

    def __init__(self, a: Number = 0, b: Number = 0, n: int = 1) -> None:
        if not isinstance(n, int) or n < 1:
            raise ConfigError(f"n must be a positive integer, got {n!r}")
        a, b = Fraction(a), Fraction(b)
        root = _square_root(n)
        if root is not None and b:
            a, b = a + b * root, Fraction(0)
        self._a = a
        self._b = b
        self._n = n

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def n(self) -> int:
        return self._n

    @classmethod
    def sqrtn(cls, n: int) -> Scalar:
        return cls(0, 1, n)

    def _coerce(self, other: object) -> Scalar | None:
        if isinstance(other, Scalar):
            if other._n != self._n:
                raise ConfigError(f"cannot combine scalars over n={self._n} and n={other._n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other, 0, self._n)
        return None

    def __repr__(self) -> str:
        return f"Scalar({self._a!s}, {self._b!s}, n={self._n})"

    def __str__(self) -> str:
        return render(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return (self._a, self._b, self._n) == (other._a, other._b, other._n)
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._n))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __neg__(self) -> Scalar:
        return Scalar(-self._a, -self._b, self._n)

    def __pos__(self) -> Scalar:
        return self

    def __add__(self, other: object) -> Scalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self._a + o._a, self._b + o._b, self._n)

    __radd__ = __add__

    def __sub__(self, other: object) -> Scalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self._a - o._a, self._b - o._b, self._n)

    def __rsub__(self, other: object) -> Scalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Scalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        return Scalar(a1 * a2 + self._n * b1 * b2, a1 * b2 + a2 * b1, self._n)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(sqrt n)")
        norm = self._a * self._a - self._n * self._b * self._b
        # Only possible for perfect-square n, which canonicalization rules out.
        assert norm != 0, "zero norm for a nonzero element"
        return Scalar(self._a / norm, -self._b / norm, self._n)

    def __truediv__(self, other: object) -> Scalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> Scalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> Scalar:
        if e < 0:
            return self.inverse() ** (-e)
        result = Scalar(1, 0, self._n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(n)`` as -1, 0 or 1."""
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 against n*b^2
        lhs, rhs = self._a * self._a, self._n * self._b * self._b
        return sa if lhs > rhs else sb

    def __lt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(self._n)


def sc_add(x: Scalar, y: Scalar) -> Scalar:
    return x + y


def sc_mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def sc_inv(x: Scalar) -> Scalar:
    return x.inverse()


@lru_cache(maxsize=4096)
def sc_sqrtn_pow(e: int, n: int) -> Scalar:
    """``(sqrt n) ** e`` for any integer ``e``."""
    if e % 2 == 0:
        return Scalar(Fraction(n) ** (e // 2), 0, n)
    return Scalar(0, Fraction(n) ** ((e - 1) // 2), n)


def zero(n: int) -> Scalar:
    return Scalar(0, 0, n)


def one(n: int) -> Scalar:
    return Scalar(1, 0, n)


def render(x: Scalar) -> str:
    """Render as ``p/q + r/s*sqrt(n)``, omitting zero parts."""
    a, b = x.a, x.b
    if not b:
        return str(a)
    mag = abs(b)
    irr = f"sqrt({x.n})" if mag == 1 else f"{mag}*sqrt({x.n})"
    if not a:
        return irr if b > 0 else f"-{irr}"
    return f"{a} {'+' if b > 0 else '-'} {irr}"


_SCALAR_RE = re.compile(
    r"^\s*(?:(?P<a>-?\d+(?:/\d+)?)\s*(?P<op>[+-])\s*|(?P<neg>-))?"
    r"(?:(?P<b>\d+(?:/\d+)?)\*)?sqrt\((?P<n>\d+)\)\s*$"
)


def parse_scalar(text: str, n: int) -> Scalar:
    """Inverse of :func:`render`."""
    if "sqrt" not in text:
        return Scalar(Fraction(text.strip()), 0, n)
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ValueError(f"malformed scalar {text!r}")
    if int(m["n"]) != n:
        raise ConfigError(f"scalar {text!r} is not over n={n}")
    b = Fraction(m["b"]) if m["b"] else Fraction(1)
    if m["op"] == "-" or m["neg"]:
        b = -b
    a = Fraction(m["a"]) if m["a"] else Fraction(0)
    return Scalar(a, b, n)
