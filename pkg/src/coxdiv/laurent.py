"""Laurent polynomials over the prime fields F_2 and F_3, and
determinant-one matrices over them.

A polynomial is stored normalized as (valuation, coefficients): the
coefficient vector starts and ends with a nonzero entry unless the
polynomial is zero (empty vector, valuation 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError, DetViolationError

SUPPORTED_Q = (2, 3)


def _check_q(q: int):
    if q not in SUPPORTED_Q:
        raise ConfigError(f"unsupported field size q={q}; supported: {SUPPORTED_Q}")


@dataclass(frozen=True)
class LaurentPoly:
    """An element of F_q[t, t^-1]."""

    q: int
    val: int  # exponent of the lowest term; 0 for the zero polynomial
    coeffs: tuple  # coeffs[k] is the coefficient of t^(val + k)

    @staticmethod
    def make(q: int, val: int, coeffs: Sequence[int]) -> "LaurentPoly":
        _check_q(q)
        coeffs = [c % q for c in coeffs]
        lo = 0
        while lo < len(coeffs) and coeffs[lo] == 0:
            lo += 1
        hi = len(coeffs)
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            return LaurentPoly(q, 0, ())
        return LaurentPoly(q, val + lo, tuple(coeffs[lo:hi]))

    @staticmethod
    def zero(q: int) -> "LaurentPoly":
        return LaurentPoly.make(q, 0, ())

    @staticmethod
    def one(q: int) -> "LaurentPoly":
        return LaurentPoly.make(q, 0, (1,))

    @staticmethod
    def term(q: int, coeff: int, exponent: int) -> "LaurentPoly":
        """coeff * t^exponent."""
        return LaurentPoly.make(q, exponent, (coeff,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Highest exponent (valuation for the zero polynomial)."""
        return self.val + len(self.coeffs) - 1 if self.coeffs else 0

    def span(self) -> int:
        """Width of the support: degree - valuation (0 if zero)."""
        return len(self.coeffs) - 1 if self.coeffs else 0

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.q != other.q:
            raise ConfigError("mixed field sizes")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.val, other.val)
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        out = [0] * (hi - lo)
        for k, c in enumerate(self.coeffs):
            out[self.val - lo + k] = c
        for k, c in enumerate(other.coeffs):
            out[other.val - lo + k] = (out[other.val - lo + k] + c) % self.q
        return LaurentPoly.make(self.q, lo, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.q, self.val,
                           tuple((-c) % self.q for c in self.coeffs))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.q != other.q:
            raise ConfigError("mixed field sizes")
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero(self.q)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = (out[i + j] + a * b) % self.q
        return LaurentPoly.make(self.q, self.val + other.val, out)

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def render(self) -> str:
        """Human-readable form like ``t^-1+1+t``, ascending exponents."""
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.val + k
            if e == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                if e == 1:
                    parts.append(f"{head}t")
                else:
                    parts.append(f"{head}t^{e}")
        return "+".join(parts)

    @staticmethod
    def parse(q: int, text: str) -> "LaurentPoly":
        """Inverse of render."""
        text = text.strip().replace(" ", "")
        if text == "0":
            return LaurentPoly.zero(q)
        terms: dict = {}
        for tok in text.split("+"):
            if not tok:
                raise ConfigError(f"bad Laurent term in {text!r}")
            if "t" in tok:
                head, _, tail = tok.partition("t")
                coeff = int(head) if head else 1
                if tail.startswith("^"):
                    e = int(tail[1:])
                elif tail == "":
                    e = 1
                else:
                    raise ConfigError(f"bad Laurent term {tok!r}")
            else:
                coeff = int(tok)
                e = 0
            terms[e] = (terms.get(e, 0) + coeff) % q
        lo = min(terms)
        hi = max(terms)
        return LaurentPoly.make(q, lo, [terms.get(e, 0) for e in range(lo, hi + 1)])

    def __str__(self):
        return self.render()


def laurent_mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    return p * r


@dataclass(frozen=True)
class SLMatrix:
    """An n x n matrix with entries in F_q[t, t^-1] and determinant 1."""

    q: int
    n: int
    entries: tuple  # row-major tuple of LaurentPoly

    @staticmethod
    def from_rows(q: int, rows: Sequence[Sequence[LaurentPoly]],
                  check: bool = True) -> "SLMatrix":
        n = len(rows)
        flat = tuple(x for row in rows for x in row)
        m = SLMatrix(q, n, flat)
        if check and m.det() != LaurentPoly.one(q):
            raise DetViolationError("matrix determinant is not 1")
        return m

    @staticmethod
    def identity(q: int, n: int = 2) -> "SLMatrix":
        one, zero = LaurentPoly.one(q), LaurentPoly.zero(q)
        return SLMatrix(q, n, tuple(
            one if i == j else zero for i in range(n) for j in range(n)))

    @staticmethod
    def elementary(q: int, n: int, i: int, j: int, x: LaurentPoly) -> "SLMatrix":
        """E_ij(x): identity plus x in position (i, j), i != j."""
        ident = SLMatrix.identity(q, n)
        entries = list(ident.entries)
        entries[i * n + j] = x
        return SLMatrix(q, n, tuple(entries))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def det(self) -> LaurentPoly:
        """Determinant by cofactor expansion (exact, small n)."""
        n = self.n
        if n == 1:
            return self.entries[0]
        if n == 2:
            return self[0, 0] * self[1, 1] - self[0, 1] * self[1, 0]
        acc = LaurentPoly.zero(self.q)
        for j in range(n):
            a = self[0, j]
            if a.is_zero():
                continue
            minor_rows = [
                [self[r, c] for c in range(n) if c != j]
                for r in range(1, n)
            ]
            minor = SLMatrix(self.q, n - 1,
                             tuple(x for row in minor_rows for x in row))
            term = a * minor.det()
            acc = acc + (term if j % 2 == 0 else -term)
        return acc

    def max_span(self) -> int:
        return max(e.span() for e in self.entries)


def sl_mul(a: SLMatrix, b: SLMatrix, check: bool = True) -> SLMatrix:
    """Exact product; re-verifies det = 1."""
    if a.q != b.q or a.n != b.n:
        raise ConfigError("incompatible matrices")
    n = a.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = LaurentPoly.zero(a.q)
            for k in range(n):
                x = a[i, k]
                y = b[k, j]
                if not (x.is_zero() or y.is_zero()):
                    acc = acc + x * y
            row.append(acc)
        rows.append(row)
    return SLMatrix.from_rows(a.q, rows, check=check)
