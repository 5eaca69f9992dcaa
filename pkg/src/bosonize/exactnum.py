"""Exact arithmetic: rationals and the quadratic field Q(sqrt 2).

All weight/correlator algebra in the exact lane runs over Fraction, or over
QSqrt2 when the self-dual (critical) point is involved.  Floats only appear
in explicitly numerical code paths.
"""

from __future__ import annotations

import math
from fractions import Fraction

Scalar = "int | Fraction | QSqrt2"


class QSqrt2:
    """a + b*sqrt(2) with a, b rational.  Immutable."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, *_):
        raise AttributeError("QSqrt2 is immutable")

    # -- coercion ---------------------------------------------------------

    @staticmethod
    def of(x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        return QSqrt2(Fraction(x), 0)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self!r} is irrational")
        return self.a

    # -- ring ops ----------------------------------------------------------

    def __add__(self, other):
        o = QSqrt2.of(other)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-QSqrt2.of(other))

    def __rsub__(self, other):
        return QSqrt2.of(other) + (-self)

    def __mul__(self, other):
        o = QSqrt2.of(other)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b,
                      self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conj(self) -> "QSqrt2":
        """Galois conjugate a - b*sqrt(2)."""
        return QSqrt2(self.a, -self.b)

    def __truediv__(self, other):
        o = QSqrt2.of(other)
        n = o.a * o.a - 2 * o.b * o.b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return self * QSqrt2(o.a / n, -o.b / n)

    def __rtruediv__(self, other):
        return QSqrt2.of(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return QSqrt2(1) / self ** (-k)
        out, base = QSqrt2(1), self
        while k:
            if k & 1:
                out = out * base
            base, k = base * base, k >> 1
        return out

    # -- order / equality --------------------------------------------------

    def __eq__(self, other):
        o = QSqrt2.of(other)
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash(("qsqrt2", self.a, self.b))

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(2)."""
        a, b = self.a, self.b
        if b == 0:
            return 0 if a == 0 else (1 if a > 0 else -1)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        s = 1 if a > 0 else -1
        return s if a * a > 2 * b * b else -s

    def __lt__(self, other):
        return (self - QSqrt2.of(other)).sign() < 0

    def __le__(self, other):
        return (self - QSqrt2.of(other)).sign() <= 0

    def __gt__(self, other):
        return (self - QSqrt2.of(other)).sign() > 0

    def __ge__(self, other):
        return (self - QSqrt2.of(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    def __repr__(self):
        if self.b == 0:
            return f"QSqrt2({self.a})"
        return f"QSqrt2({self.a}, {self.b})"


SQRT2 = QSqrt2(0, 1)
#: self-dual Ising coupling, the fixed point of w -> (1-w)/(1+w)
W_CRITICAL = SQRT2 - 1


def as_scalar(x):
    """Normalize int/str/Fraction/QSqrt2 to Fraction or QSqrt2."""
    if isinstance(x, QSqrt2):
        return x.as_fraction() if x.is_rational else x
    return Fraction(x)


def to_float(x) -> float:
    return float(x)


def scalar_eq(x, y) -> bool:
    """Exact equality across the Fraction/QSqrt2 divide."""
    if isinstance(x, QSqrt2) or isinstance(y, QSqrt2):
        return QSqrt2.of(x) == QSqrt2.of(y)
    return Fraction(x) == Fraction(y)


def parse_scalar(s):
    """Parse "3/4", 3, or {"a": "1", "b": "-1"} (meaning a + b*sqrt2)."""
    if isinstance(s, dict):
        return QSqrt2(Fraction(s.get("a", 0)), Fraction(s.get("b", 0)))
    if isinstance(s, QSqrt2):
        return s
    return Fraction(s)


def scalar_to_json(x):
    x = as_scalar(x)
    if isinstance(x, QSqrt2):
        return {"a": str(x.a), "b": str(x.b)}
    return str(x)
