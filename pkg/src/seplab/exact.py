"""Exact rational enclosures for the transcendental pieces of the closed forms.

The closed-form bounds are evaluated in 64-bit floats for everyday use; the
acceptance checks additionally compare exact integers against a *rational
enclosure* of each bound, so an inequality is certified without trusting
floating-point rounding.
"""

from __future__ import annotations

from fractions import Fraction


def exp_enclosure(x: Fraction | int, terms: int | None = None) -> tuple[Fraction, Fraction]:
    """Return rationals ``(lo, hi)`` with ``lo <= e**x <= hi``.

    Uses the Taylor series with an explicit geometric tail bound; *terms* is
    grown automatically until the tail ratio drops below 1/2.
    """
    x = Fraction(x)
    if x < 0:
        lo, hi = exp_enclosure(-x, terms)
        return (1 / hi, 1 / lo)
    n = terms if terms is not None else max(32, 2 * int(x) + 24)
    while Fraction(x, n + 1) >= Fraction(1, 2):
        n *= 2
    total = Fraction(0)
    term = Fraction(1)
    for k in range(n):
        total += term
        term = term * x / (k + 1)
    # ratio of consecutive tail terms is <= x/(n+1) < 1/2, so the tail is <= 2*term
    return (total, total + 2 * term)


def certify_le(lhs: Fraction | int, rhs_enclosure: tuple[Fraction, Fraction]) -> bool:
    """True iff *lhs* <= the lower end of *rhs_enclosure* (hence <= the real value)."""
    return Fraction(lhs) <= rhs_enclosure[0]
