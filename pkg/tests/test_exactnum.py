import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from bosonize.exactnum import (QSqrt2, SQRT2, W_CRITICAL, parse_scalar,
                               scalar_eq, scalar_to_json)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def test_basic_algebra():
    x = QSqrt2(1, 1)
    assert x * x == QSqrt2(3, 2)
    assert SQRT2 * SQRT2 == 2
    assert (1 / SQRT2) == SQRT2 / 2
    assert x - x == 0
    assert float(QSqrt2(0, 1)) == math.sqrt(2.0)


def test_critical_coupling_self_dual():
    w = W_CRITICAL
    assert (1 - w) / (1 + w) == w
    assert w > 0 and w < 1


def test_sign_and_order():
    assert QSqrt2(-1, 1).sign() == 1      # sqrt2 > 1
    assert QSqrt2(-3, 2).sign() == -1     # 2*sqrt2 < 3
    assert QSqrt2(3, -2).sign() == 1
    assert QSqrt2(Fraction(-7, 5), 1).sign() == 1   # sqrt2 > 1.4
    assert QSqrt2(Fraction(-3, 2), 1).sign() == -1  # sqrt2 < 1.5
    assert abs(QSqrt2(1, -1)) == QSqrt2(-1, 1)


@given(rats, rats, rats, rats)
def test_field_ops_match_floats(a, b, c, d):
    x, y = QSqrt2(a, b), QSqrt2(c, d)
    assert math.isclose(float(x + y), float(x) + float(y),
                        rel_tol=1e-12, abs_tol=1e-12)
    assert math.isclose(float(x * y), float(x) * float(y),
                        rel_tol=1e-12, abs_tol=1e-9)
    if y != 0:
        assert x / y * y == x


@given(rats, rats)
def test_conjugate_norm(a, b):
    x = QSqrt2(a, b)
    n = x * x.conj()
    assert n.is_rational
    assert n.as_fraction() == a * a - 2 * b * b


def test_json_scalars():
    assert parse_scalar("3/4") == Fraction(3, 4)
    w = parse_scalar(scalar_to_json(W_CRITICAL))
    assert scalar_eq(w, W_CRITICAL)
    assert parse_scalar(scalar_to_json(Fraction(2, 3))) == Fraction(2, 3)
