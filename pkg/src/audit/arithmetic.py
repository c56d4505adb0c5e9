"""
Dual-mode arithmetic: exact rationals (fractions.Fraction) or float64.

Exact mode is what the constructions and the theorem harness run in, since
the identities they check are equalities. Float mode serves dataset audits.
Comparisons are exact when both operands are exact and tolerance-based
otherwise.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Optional, Union

from src.config.constants import FLOAT_TOL, MODE_FLOAT, MODE_RATIONAL
from src.models.errors import InvalidParameter

Number = Union[Fraction, float, int]
Label = Union[int, Fraction, str]

_NUMERIC_TEXT = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?$")


# ======================================================================
# Labels
# ======================================================================

def normalize_label(value: object) -> Label:
    """
    Canonical form of a category label.

    Integers stay ints, other rationals become Fractions (ints when the
    denominator is 1), and text that reads as a number is parsed so JSON and
    CSV inputs agree. Anything else is kept as a string.
    """
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidParameter(f"Label {value!r} is not finite")
        return normalize_label(Fraction(repr(value)))
    text = str(value).strip()
    if _NUMERIC_TEXT.match(text):
        return normalize_label(Fraction(text))
    return text


def is_numeric_label(label: Label) -> bool:
    return isinstance(label, (int, Fraction)) and not isinstance(label, bool)


def label_sort_key(label: Label) -> tuple:
    """Numbers ascending first, then strings lexicographically."""
    if is_numeric_label(label):
        return (0, Fraction(label), "")
    return (1, Fraction(0), str(label))


def format_label(label: Label) -> Union[int, str]:
    """JSON form of a label: ints as numbers, fractions as 'n/d' text."""
    if isinstance(label, Fraction):
        return f"{label.numerator}/{label.denominator}"
    return label


# ======================================================================
# Numbers
# ======================================================================

def is_exact(value: Number) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def mode_of(values: Iterable[Number]) -> str:
    """Rational iff every value is exact."""
    for value in values:
        if not is_exact(value):
            return MODE_FLOAT
    return MODE_RATIONAL


def parse_number(value: object, mode: str) -> Number:
    """
    Parse a probability / parameter written as a number, a decimal string or
    a 'num/den' rational, into the requested arithmetic mode.
    """
    if isinstance(value, bool):
        raise InvalidParameter(f"Expected a number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        exact = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidParameter(f"Number {value!r} is not finite")
        exact = Fraction(repr(value))
    else:
        text = str(value).strip()
        if not _NUMERIC_TEXT.match(text):
            raise InvalidParameter(f"Cannot parse {value!r} as a number")
        try:
            exact = Fraction(text)
        except ZeroDivisionError as exc:
            raise InvalidParameter(f"Zero denominator in {value!r}") from exc
    return to_mode(exact, mode)


def to_mode(value: Number, mode: str) -> Number:
    if mode == MODE_RATIONAL:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(value)
    if mode == MODE_FLOAT:
        return float(value)
    raise InvalidParameter(f"Unknown arithmetic mode '{mode}'")


def zero(mode: str) -> Number:
    return Fraction(0) if mode == MODE_RATIONAL else 0.0


def one(mode: str) -> Number:
    return Fraction(1) if mode == MODE_RATIONAL else 1.0


def rational_from_float(value: float, max_denominator: int) -> Fraction:
    """Closest rational with a bounded denominator (used for seeded draws)."""
    return Fraction(value).limit_denominator(max_denominator)


# ======================================================================
# Comparisons
# ======================================================================

def approx_eq(a: Number, b: Number, tol: float = FLOAT_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def approx_le(a: Number, b: Number, tol: float = FLOAT_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a <= b
    return float(a) <= float(b) + tol


def strictly_greater(a: Number, b: Number, tol: float = FLOAT_TOL) -> bool:
    """a > b, with a float-mode margin so boundary cases are never flagged."""
    if is_exact(a) and is_exact(b):
        return a > b
    return float(a) > float(b) + tol


def is_positive(value: Number, tol: Optional[float] = None) -> bool:
    if is_exact(value) or tol is None:
        return value > 0
    return float(value) > tol


# ======================================================================
# Output
# ======================================================================

def format_number(value: Number) -> Union[str, float, int]:
    """
    Report / JSON form of a number: exact values as 'n/d' strings (plain
    integers as ints), floats as JSON numbers.
    """
    if isinstance(value, bool):
        raise InvalidParameter(f"Expected a number, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"
    return float(value)
