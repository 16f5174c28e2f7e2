from fractions import Fraction

import pytest

from toricgcp import GF, QQ, FieldError, field_from_spec


def test_rational_inverse_is_exact():
    assert QQ.inv(3) == Fraction(1, 3)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(0)


def test_prime_field_arithmetic():
    F = GF(101)
    assert F(-1) == 100
    assert F(7) * F.inv(7) % 101 == 1
    assert F(Fraction(1, 2)) == 51


def test_small_characteristic_guard():
    with pytest.raises(FieldError):
        GF(3)
    with pytest.warns(UserWarning):
        GF(3, allow_small=True)


def test_field_specs():
    assert field_from_spec("Q") is QQ
    assert field_from_spec({"GFp": 13}) == GF(13)
    assert field_from_spec("gfp:17") == GF(17)
    with pytest.raises(FieldError):
        field_from_spec("R")
    with pytest.raises(FieldError):
        field_from_spec({"GFp": 15})
