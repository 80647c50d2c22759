"""Exact rational helpers shared by the numeric layers and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError


def parse_rational(text: str) -> Fraction:
    """Parse "p", "-p" or "p/q" into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_rational(value: Fraction | int) -> str:
    """Canonical string form: integers bare, otherwise "p/q" in lowest terms."""
    return str(Fraction(value))
