from fractions import Fraction

import pytest

from chowstab.exceptions import InputError
from chowstab.rational import (
    as_rat,
    common_denominator,
    format_rat,
    is_integral,
    parse_rat,
)


def test_parse_rat_fraction():
    assert parse_rat("-4/7") == Fraction(-4, 7)


def test_parse_rat_integer():
    assert parse_rat(" 3 ") == 3


def test_parse_rat_rejects_garbage():
    with pytest.raises(InputError, match="expected 'p/q'"):
        parse_rat("0.5")


def test_parse_rat_rejects_zero_denominator():
    with pytest.raises(InputError, match="Invalid rational"):
        parse_rat("1/0")


def test_format_rat_always_has_denominator():
    assert format_rat(3) == "3/1"
    assert format_rat(Fraction(2, -6)) == "-1/3"


def test_as_rat_rejects_floats_and_bools():
    with pytest.raises(InputError):
        as_rat(0.5)

    with pytest.raises(InputError):
        as_rat(True)


def test_is_integral():
    assert is_integral("6/3")
    assert not is_integral(Fraction(1, 2))


def test_common_denominator():
    assert common_denominator([Fraction(1, 4), Fraction(5, 6), 2]) == 12
    assert common_denominator([]) == 1
