"""
Extended-real exponents.

An exponent is either a `fractions.Fraction` or the symbolic value `INF`.
Region arithmetic runs on these exactly; numerical code converts with
`to_float` at the last moment.
"""

import math
from fractions import Fraction
from typing import Any, Union

from pydantic import BeforeValidator, PlainSerializer
from typing_extensions import Annotated

from testbench.core.exceptions import InvalidParameterError

INF = "inf"

Exponent = Union[Fraction, str]

_INF_SPELLINGS = {"inf", "infty", "infinity", "∞", "+inf", "oo"}


def is_inf(value: Exponent) -> bool:
    return isinstance(value, str) and value == INF


def parse_exponent(value: Any) -> Exponent:
    """
    Parse user input into an exact exponent.

    Accepts Fractions, ints, floats (converted through their decimal repr so
    0.1 becomes 1/10), strings such as "3/2", "1.5" or "inf".
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidParameterError(f"exponent must be numeric, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if not math.isfinite(value):
            raise InvalidParameterError(f"exponent must be finite or +inf, got {value}")
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip().lower()
        if text in _INF_SPELLINGS:
            return INF
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameterError(f"cannot parse exponent {value!r}") from exc
    raise InvalidParameterError(f"cannot parse exponent {value!r}")


def reciprocal(value: Exponent) -> Fraction:
    """1/value with 1/∞ = 0."""
    if is_inf(value):
        return Fraction(0)
    if value == 0:
        raise InvalidParameterError("exponent 0 has no finite reciprocal")
    return 1 / Fraction(value)


def from_reciprocal(inverse: Fraction) -> Exponent:
    """Exponent with the given reciprocal, 1/0 read as ∞."""
    inverse = Fraction(inverse)
    if inverse == 0:
        return INF
    return 1 / inverse


def conjugate(value: Exponent) -> Exponent:
    """Hölder conjugate: 1/p + 1/p' = 1."""
    inverse = reciprocal(value)
    if inverse > 1 or inverse < 0:
        raise InvalidParameterError(
            f"conjugate exponent needs p >= 1, got {format_exponent(value)}"
        )
    return from_reciprocal(1 - inverse)


def to_float(value: Exponent) -> float:
    return math.inf if is_inf(value) else float(value)


def format_exponent(value: Exponent) -> str:
    if is_inf(value):
        return INF
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else str(value)


def compare(a: Exponent, b: Exponent) -> int:
    """Three-way comparison of extended reals."""
    if is_inf(a) or is_inf(b):
        return int(is_inf(a)) - int(is_inf(b))
    return (a > b) - (a < b)


ExponentField = Annotated[
    Any,
    BeforeValidator(parse_exponent),
    PlainSerializer(format_exponent, return_type=str),
]
