"""Scalar backends: exact rationals and floats with a shared comparison API.

Exact values are ``fractions.Fraction``; approximate values are ``float``.
Mixed comparisons degrade to the float rules.  The float rules use a
relative max-norm tolerance (default 1e-9).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

DEFAULT_TOL = 1e-9


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (Fraction, int))


def scalar_eq(a: Scalar, b: Scalar, tol: float = DEFAULT_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= tol * max(1.0, abs(fa), abs(fb))


def scalar_is_zero(x: Scalar, tol: float = DEFAULT_TOL) -> bool:
    if is_exact(x):
        return x == 0
    return abs(float(x)) <= tol


def vector_is_zero(v, tol: float = DEFAULT_TOL) -> bool:
    return all(scalar_is_zero(x, tol) for x in v)


def vector_eq(v, w, tol: float = DEFAULT_TOL) -> bool:
    if len(v) != len(w):
        return False
    return all(scalar_eq(a, b, tol) for a, b in zip(v, w))


def parse_scalar(text: str, exact: bool = True) -> Scalar:
    """Parse "num/den", integer, or decimal notation.

    With ``exact`` the result is a Fraction (decimals parse exactly,
    e.g. "0.456" -> 57/125); otherwise a float.
    """
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad scalar literal: {text!r}") from exc
    return value if exact else float(value)


def format_scalar(x: Scalar) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))
