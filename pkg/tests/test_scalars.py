from fractions import Fraction

import mpmath
import pytest

from polyhg.scalars import (
    DomainError,
    coerce,
    mpf_to_fraction,
    parse_scalar,
    scalar_cmp,
    scalar_str,
    sqrt_scalar,
    sum_tolerance,
    to_mpf,
    working_precision,
)


def test_parse_rational_strings():
    assert parse_scalar("3/7") == Fraction(3, 7)
    assert parse_scalar("-12") == Fraction(-12)
    assert parse_scalar("+4/6") == Fraction(2, 3)


def test_parse_decimal_forces_float_mode():
    v = parse_scalar("0.25", prec=128)
    assert isinstance(v, mpmath.mpf)
    assert v == Fraction(1, 4)  # 0.25 is dyadic, equality is exact


def test_parse_garbage_rejected():
    with pytest.raises(DomainError):
        parse_scalar("3/7/2")
    with pytest.raises(DomainError):
        parse_scalar("one half")


def test_scalar_str_roundtrip_rational():
    for f in (Fraction(3, 7), Fraction(-5), Fraction(0), Fraction(22, 7)):
        assert parse_scalar(scalar_str(f)) == f


def test_scalar_str_roundtrip_float():
    with working_precision(256):
        x = mpmath.sqrt(2)
        s = scalar_str(x)
        y = mpmath.mpf(s)
        assert x == y


def test_coerce_rejects_machine_floats():
    with pytest.raises(DomainError):
        coerce(0.1)
    assert coerce(3) == Fraction(3)


def test_sqrt_exact_when_perfect_square():
    assert sqrt_scalar(Fraction(9, 16)) == Fraction(3, 4)
    root2 = sqrt_scalar(Fraction(2))
    assert isinstance(root2, mpmath.mpf)  # inexact root went float
    assert mpf_to_fraction(root2) ** 2 != Fraction(2)


def test_sqrt_precision():
    r = sqrt_scalar(Fraction(2), prec=256)
    err = abs(mpf_to_fraction(r) ** 2 - 2)
    assert err < Fraction(1, 2 ** 250)


def test_scalar_cmp_across_modes():
    third = Fraction(1, 3)
    approx = to_mpf(third, 64)
    # the 64-bit rounding of 1/3 is not exactly 1/3; cmp must see that
    assert scalar_cmp(approx, third) != 0
    assert scalar_cmp(to_mpf(Fraction(1, 4), 64), Fraction(1, 4)) == 0
    assert scalar_cmp(Fraction(1, 2), to_mpf(Fraction(1, 4), 64)) > 0


def test_sum_tolerance_scale():
    assert sum_tolerance(256) == Fraction(1, 2 ** 246)
