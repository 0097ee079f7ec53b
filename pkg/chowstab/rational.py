import math
from fractions import Fraction

from .exceptions import InputError


def as_rat(value):
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value

    if isinstance(value, bool):
        raise InputError(f"Expected a rational, got {value!r}")

    if isinstance(value, int):
        return Fraction(value)

    if isinstance(value, str):
        return parse_rat(value)

    raise InputError(f"Expected a rational, got {value!r}")


def parse_rat(text):
    try:
        numerator, _, denominator = text.strip().partition("/")
        if not denominator:
            return Fraction(int(numerator))
        return Fraction(int(numerator), int(denominator))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"Invalid rational {text!r}, expected 'p/q'")


def format_rat(value):
    """Render as "p/q" in lowest terms, always with an explicit denominator."""
    value = as_rat(value)
    return f"{value.numerator}/{value.denominator}"


def is_integral(value):
    return as_rat(value).denominator == 1


def common_denominator(values):
    return math.lcm(1, *(as_rat(v).denominator for v in values))
