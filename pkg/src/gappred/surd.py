"""Exact numbers of the form a + b*sqrt(r).

The randomized mixers pick their confidence parameter as an irrational
function of gamma, so offers, ranking keys, mixing weights and expected
values live in a quadratic field Q(sqrt r).  ``Surd`` keeps a, b rational
and r a square-free positive integer, gives exact signs and comparisons,
and mixes freely with ``int`` and ``Fraction``.  Two irrational surds with
different radicands cannot be combined arithmetically.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Tuple, Union

Exact = Union[int, Fraction, "Surd"]


def squarefree_split(n: int) -> Tuple[int, int]:
    """Return (k, r) with n == k*k*r and r square-free."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    k, r = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        k *= d ** (e // 2)
        if e % 2:
            r *= d
        d += 1
    return k, r * n


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Surd:
    __slots__ = ("a", "b", "r")

    def __init__(self, a=0, b=0, r: int = 1):
        a, b = _frac(a), _frac(b)
        if b != 0:
            k, r = squarefree_split(int(r))
            b *= k
        if r == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            r = 1
        self.a, self.b, self.r = a, b, r

    @classmethod
    def sqrt(cls, q) -> "Surd":
        """Exact square root of a non-negative rational."""
        q = _frac(q)
        if q < 0:
            raise ValueError("square root of a negative number")
        if q == 0:
            return cls(0)
        # sqrt(p/d) = sqrt(p*d)/d
        return cls(0, Fraction(1, q.denominator), q.numerator * q.denominator)

    # Coercion

    @staticmethod
    def coerce(x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return Surd(_frac(x))

    def _common(self, other: "Surd") -> int:
        if self.b == 0:
            return other.r
        if other.b == 0 or other.r == self.r:
            return self.r
        raise ValueError(f"cannot mix sqrt({self.r}) and sqrt({other.r})")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return self.a

    def simplify(self) -> Exact:
        """Collapse to a Fraction when the value is rational."""
        return self.a if self.b == 0 else self

    # Arithmetic

    def __add__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return Surd(self.a + o.a, self.b + o.b, self._common(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.r)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._common(o)
        return Surd(self.a * o.a + self.b * o.b * r, self.a * o.b + self.b * o.a, r)

    __rmul__ = __mul__

    def reciprocal(self) -> "Surd":
        norm = self.a * self.a - self.b * self.b * self.r
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        return Surd(self.a / norm, -self.b / norm, self.r)

    def __truediv__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        try:
            o = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.reciprocal()

    # Ordering

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa >= 0 and sb >= 0:
            return 1
        if sa <= 0 and sb <= 0:
            return -1
        # Opposite signs: the larger magnitude wins.  a^2 == b^2 r is
        # impossible for square-free r > 1.
        return sa if self.a * self.a > self.b * self.b * self.r else sb

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, Surd):
            return self.a == other.a and self.b == other.b and self.r == other.r
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def __lt__(self, other):
        try:
            return self._cmp(other) < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return self._cmp(other) <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return self._cmp(other) > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return self._cmp(other) >= 0
        except TypeError:
            return NotImplemented

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # Approximation

    def interval(self, width=Fraction(1, 10**12)) -> Tuple[Fraction, Fraction]:
        """Rational lo <= self <= hi with hi - lo <= width."""
        width = _frac(width)
        if width <= 0:
            raise ValueError("width must be positive")
        if self.b == 0:
            return self.a, self.a
        scale = math.ceil(abs(self.b) / width)
        k = math.isqrt(self.r * scale * scale)
        lo_root, hi_root = Fraction(k, scale), Fraction(k + 1, scale)
        ends = (self.a + self.b * lo_root, self.a + self.b * hi_root)
        return min(ends), max(ends)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.r)

    # Text

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"{abs(self.b)}*sqrt({self.r})"
        if self.a == 0:
            return root if self.b > 0 else "-" + root
        return f"{self.a}{'+' if self.b > 0 else '-'}{root}"

    def __repr__(self):
        return f"Surd({self})"

    _PATTERN = re.compile(r"(?:([-+]?[\d./]+)(?=[-+]))?([-+]?[\d./]+)\*sqrt\((\d+)\)")

    @classmethod
    def parse(cls, text: str) -> "Surd":
        """Inverse of ``str``: accepts 'p/q', 'c/d*sqrt(r)' or 'p/q+c/d*sqrt(r)'."""
        text = text.strip().replace(" ", "")
        try:
            if "sqrt" not in text:
                return cls(Fraction(text))
            m = cls._PATTERN.fullmatch(text)
            if m is None:
                raise ValueError
            return cls(Fraction(m.group(1) or 0), Fraction(m.group(2)), int(m.group(3)))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not an exact number: {text!r}") from None


def exact_sign(x: Exact) -> int:
    if isinstance(x, Surd):
        return x.sign()
    return (x > 0) - (x < 0)


def to_exact(x: Exact) -> Exact:
    """Normalise a value to Fraction when rational, else keep the surd."""
    if isinstance(x, Surd):
        return x.simplify()
    return _frac(x)


def enclose(x: Exact, width=Fraction(1, 10**12)) -> Tuple[Fraction, Fraction]:
    """Certified rational interval around an exact value."""
    return Surd.coerce(x).interval(width)


def format_exact(x: Exact) -> str:
    return str(to_exact(x))


def parse_exact(text: str) -> Exact:
    return Surd.parse(text).simplify()
