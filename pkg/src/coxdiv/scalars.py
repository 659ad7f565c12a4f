"""Exact arithmetic in the real field Q(sqrt2, sqrt3).

Every number is stored as a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational
(usually integer) coefficients.  This field contains cos(pi/m) for
m in {1, 2, 3, 4, 6}, so all root and bilinear-form computations for the
supported Coxeter labels close inside it.

The sign of a nonzero element is decided exactly by nested squaring:
write the number as X + Y*sqrt3 with X, Y in Q(sqrt2); when X and Y have
opposite signs, compare X^2 against 3*Y^2 (both back in Q(sqrt2)), and
recurse with the same trick one level down for p + q*sqrt2.  No floating
point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _sign_rat(p: Rational) -> int:
    if p > 0:
        return 1
    if p < 0:
        return -1
    return 0


def _sign_q2(p: Rational, q: Rational) -> int:
    """Exact sign of p + q*sqrt2."""
    sp, sq = _sign_rat(p), _sign_rat(q)
    if sq == 0:
        return sp
    if sp == 0:
        return sq
    if sp == sq:
        return sp
    # opposite signs: |p| vs sqrt2*|q|  <=>  p^2 vs 2*q^2 (never equal)
    return sp if p * p > 2 * q * q else sq


class QuadExt:
    """An element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3).

    Instances are immutable.  Coefficients may be ints or Fractions;
    integer inputs stay integers under ring operations, which keeps the
    hot paths (root and matrix arithmetic) on plain int arithmetic.
    """

    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a: Rational = 0, b: Rational = 0, c: Rational = 0, d: Rational = 0):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "QuadExt") -> "QuadExt":
        return QuadExt(self.a + other.a, self.b + other.b,
                       self.c + other.c, self.d + other.d)

    def __sub__(self, other: "QuadExt") -> "QuadExt":
        return QuadExt(self.a - other.a, self.b - other.b,
                       self.c - other.c, self.d - other.d)

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other: "QuadExt") -> "QuadExt":
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        return QuadExt(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    def scale(self, r: Rational) -> "QuadExt":
        return QuadExt(self.a * r, self.b * r, self.c * r, self.d * r)

    def half(self) -> "QuadExt":
        return QuadExt(Fraction(self.a, 2), Fraction(self.b, 2),
                       Fraction(self.c, 2), Fraction(self.d, 2))

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        # 1, sqrt2, sqrt3, sqrt6 are linearly independent over Q
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def sign(self) -> int:
        """Exact sign: -1, 0 or +1."""
        # X + Y*sqrt3 with X = a + b*sqrt2, Y = c + d*sqrt2
        sx = _sign_q2(self.a, self.b)
        sy = _sign_q2(self.c, self.d)
        if sy == 0:
            return sx
        if sx == 0:
            return sy
        if sx == sy:
            return sx
        # opposite signs: X^2 vs 3*Y^2, both in Q(sqrt2).
        # X^2 = (a^2 + 2b^2) + 2ab*sqrt2, Y^2 = (c^2 + 2d^2) + 2cd*sqrt2
        p = self.a * self.a + 2 * self.b * self.b - 3 * (self.c * self.c + 2 * self.d * self.d)
        q = 2 * self.a * self.b - 6 * self.c * self.d
        s = _sign_q2(p, q)
        # equality would force X = +-sqrt3*Y, impossible for nonzero X, Y
        return sx if s > 0 else sy

    # -- comparisons (exact, via sign of the difference) -----------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadExt):
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __lt__(self, other: "QuadExt") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "QuadExt") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "QuadExt") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "QuadExt") -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> "QuadExt":
        return -self if self.sign() < 0 else self

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            # Fraction(n) hashes like the int n, so mixed coefficient
            # representations of the same number agree here.
            h = hash((self.a, self.b, self.c, self.d))
            object.__setattr__(self, "_hash", h)
        return h

    # -- conversions -----------------------------------------------------

    def __float__(self) -> float:
        return (float(self.a) + float(self.b) * 1.4142135623730951
                + float(self.c) * 1.7320508075688772
                + float(self.d) * 2.449489742783178)

    def key(self):
        """Hashable canonical tuple (used for serialized vertex keys)."""
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"QuadExt({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __str__(self):
        parts = []
        for coeff, sym in ((self.a, ""), (self.b, "r2"), (self.c, "r3"), (self.d, "r6")):
            if coeff == 0:
                continue
            if sym and coeff == 1:
                parts.append(sym)
            elif sym and coeff == -1:
                parts.append("-" + sym)
            else:
                parts.append(f"{coeff}{sym}" if sym else f"{coeff}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += "+" + p if not p.startswith("-") else p
        return out


QZERO = QuadExt(0)
QONE = QuadExt(1)
QTWO = QuadExt(2)
SQRT2 = QuadExt(0, 1)
SQRT3 = QuadExt(0, 0, 1)
SQRT6 = QuadExt(0, 0, 0, 1)


def from_rational(r: Rational) -> QuadExt:
    return QuadExt(r)
