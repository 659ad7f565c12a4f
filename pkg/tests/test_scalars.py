"""Exact arithmetic in Q(sqrt2, sqrt3)."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxdiv.scalars import QONE, QTWO, QZERO, SQRT2, SQRT3, SQRT6, QuadExt

# integer square roots good to ~48 digits, with directed error bounds
_PREC = 10 ** 48
_S2 = math.isqrt(2 * _PREC * _PREC)
_S3 = math.isqrt(3 * _PREC * _PREC)
_S6 = math.isqrt(6 * _PREC * _PREC)


def reference_sign(x: QuadExt) -> int:
    """Independent sign via high-precision rational approximation.

    isqrt truncates, so each radical approximation errs by < 1/_PREC;
    with coefficients bounded in the tests, a nonzero value of this
    algebraic number cannot be that close to zero.
    """
    a, b, c, d = (Fraction(t) for t in (x.a, x.b, x.c, x.d))
    approx = a + b * _S2 / _PREC + c * _S3 / _PREC + d * _S6 / _PREC
    err = (abs(b) + abs(c) + abs(d) + 1) * Fraction(1, _PREC)
    if approx > err:
        return 1
    if approx < -err:
        return -1
    return 0


coeffs = st.integers(min_value=-60, max_value=60)
rationals = st.fractions(
    min_value=-30, max_value=30, max_denominator=12)


@st.composite
def quadext(draw, atoms=coeffs):
    return QuadExt(draw(atoms), draw(atoms), draw(atoms), draw(atoms))


@given(quadext())
def test_sign_matches_reference(x):
    assert x.sign() == reference_sign(x)


@given(quadext(rationals))
@settings(max_examples=60)
def test_sign_matches_reference_rational(x):
    assert x.sign() == reference_sign(x)


@given(quadext(), quadext())
def test_sign_of_difference_orders_consistently(x, y):
    s = (x - y).sign()
    assert (x > y) == (s > 0)
    assert (x == y) == (s == 0)
    assert (x < y) == (s < 0)


@given(quadext(), quadext(), quadext())
@settings(max_examples=60)
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x + (-x) == QZERO


def test_radical_products():
    assert SQRT2 * SQRT2 == QTWO
    assert SQRT3 * SQRT3 == QuadExt(3, 0, 0, 0)
    assert SQRT2 * SQRT3 == SQRT6
    assert SQRT6 * SQRT6 == QuadExt(6, 0, 0, 0)
    assert SQRT2 * SQRT6 == QuadExt(0, 0, 2, 0)


def test_half_doubles_back():
    x = QuadExt(3, -1, 7, 5)
    h = x.half()
    assert h + h == x
    assert h.a == Fraction(3, 2)


def test_zero_detection():
    assert QZERO.is_zero()
    assert not QONE.is_zero()
    assert (SQRT2 - SQRT2).is_zero()
    # linear independence of 1, sqrt2, sqrt3, sqrt6 over Q
    assert not QuadExt(0, 1, -1, 0).is_zero()
    assert QuadExt(0, 1, -1, 0).sign() < 0


def test_near_zero_classics():
    # 99 - 70*sqrt2 is about 7.2e-3
    assert (QuadExt(99, -70, 0, 0)).sign() > 0
    # 97 - 56*sqrt3 is about +5.2e-3
    assert (QuadExt(97, 0, -56, 0)).sign() > 0
    # 168 - 97*sqrt3 is about -9.0e-3
    assert (QuadExt(168, 0, -97, 0)).sign() < 0
    # 4 - sqrt2 - sqrt6 is about 0.136
    assert QuadExt(4, -1, 0, -1).sign() > 0


@given(quadext())
def test_hash_respects_equality(x):
    y = QuadExt(x.a, x.b, x.c, x.d)
    assert x == y
    assert hash(x) == hash(y)


@given(quadext())
@settings(max_examples=40)
def test_float_tracks_value(x):
    approx = float(x.a) + float(x.b) * math.sqrt(2) \
        + float(x.c) * math.sqrt(3) + float(x.d) * math.sqrt(6)
    assert float(x) == pytest.approx(approx, abs=1e-6)
