"""Exact closed-form probabilities for the stick and brick problems.

All values are :class:`fractions.Fraction` instances in lowest terms.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .errors import InvalidParams

BROKEN = "broken"
PICKUP = "pickup"
FAMILIES = (BROKEN, PICKUP)


def binomial(m: int, j: int) -> int:
    """C(m, j), zero when ``j > m``."""
    if m < 0 or j < 0:
        raise InvalidParams(f"binomial needs nonnegative arguments, got ({m}, {j})")
    return comb(m, j)


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 3:
        raise InvalidParams(f"k must be an integer >= 3, got {k!r}")


def _check_n(n: int, least: int) -> None:
    if not isinstance(n, int) or n < least:
        raise InvalidParams(f"n must be an integer >= {least}, got {n!r}")


def broken_stick_prob(k: int) -> Fraction:
    """Chance that a unit stick cut at k-1 uniform points gives a k-gon."""
    _check_k(k)
    return 1 - Fraction(k, 2 ** (k - 1))


def broken_brick_prob(n: int, k: int) -> Fraction:
    """Chance that a uniformly random composition of ``n`` into ``k`` parts is a k-gon."""
    _check_k(k)
    _check_n(n, k)
    return 1 - Fraction(k * binomial(n // 2, k - 1), binomial(n - 1, k - 1))


def pickup_bricks_prob(n: int, k: int) -> Fraction:
    """Chance that ``k`` lengths drawn independently from ``{1..n}`` form a k-gon."""
    _check_k(k)
    _check_n(n, 1)
    return 1 - Fraction(k * binomial(n + 1, k), n**k)


def pickup_sticks_prob(k: int) -> Fraction:
    """Continuous limit of :func:`pickup_bricks_prob`: ``1 - 1/(k-1)!``."""
    _check_k(k)
    return 1 - Fraction(1, factorial(k - 1))


def discrete_and_limit(n: int, k: int, family: str) -> tuple[Fraction, Fraction]:
    """The discrete probability for ``n`` and its ``n -> infinity`` limit."""
    if family == BROKEN:
        return broken_brick_prob(n, k), broken_stick_prob(k)
    if family == PICKUP:
        return pickup_bricks_prob(n, k), pickup_sticks_prob(k)
    raise InvalidParams(f"family must be one of {FAMILIES}, got {family!r}")


def convergence_gap(n: int, k: int, family: str) -> float:
    """``|discrete - limit|`` evaluated exactly, then converted to float."""
    discrete, limit = discrete_and_limit(n, k, family)
    return float(abs(discrete - limit))
