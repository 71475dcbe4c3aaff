"""Brute-force ground truth by exhaustive enumeration.

Nothing here uses the closed forms; every probability is a count (or a
weighted count) of enumerated outcomes, kept exact with ``Fraction``.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidParams
from .polygon import is_polygonal

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "POLYGON_ODDS_BUDGET"
_CHUNK = 1 << 20


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InvalidParams(f"{BUDGET_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise InvalidParams(f"{BUDGET_ENV} must be positive")
    return value


def _check_budget(required: int, budget: Optional[int]) -> None:
    limit = default_budget() if budget is None else budget
    if required > limit:
        raise BudgetExceeded(required, limit)


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing positive parts; ``k`` is their sum."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise InvalidParams("partition needs at least one part")
        for p in parts:
            if isinstance(p, bool) or not isinstance(p, int) or p < 1:
                raise InvalidParams(f"partition parts must be positive integers, got {p!r}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidParams(f"partition {parts} is not weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        """Sort descending first; the problem does not depend on order."""
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def m(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class ExactCount:
    """Result of an exhaustive count.

    ``probability`` is ``good/total`` for uniform sample spaces and a
    weighted sum otherwise. ``bad_by_index[i]`` counts outcomes in which
    piece ``i`` is at least half the total, when that was tallied.
    """

    total: int
    good: int
    probability: Fraction
    bad_by_index: Optional[tuple[int, ...]] = None

    def to_dict(self) -> dict:
        out = {
            "total": self.total,
            "good": self.good,
            "probability": f"{self.probability.numerator}/{self.probability.denominator}",
            "decimal": float(self.probability),
        }
        if self.bad_by_index is not None:
            out["bad_by_index"] = list(self.bad_by_index)
        return out


def _check_nk(n: int, k: int, least_k: int, least_n: Optional[int] = None) -> None:
    for name, v in (("n", n), ("k", k)):
        if isinstance(v, bool) or not isinstance(v, int):
            raise InvalidParams(f"{name} must be an integer, got {v!r}")
    if k < least_k:
        raise InvalidParams(f"k must be >= {least_k}, got {k}")
    if least_n is None and n < k:
        raise InvalidParams(f"need n >= k, got n={n}, k={k}")
    if least_n is not None and n < least_n:
        raise InvalidParams(f"n must be >= {least_n}, got {n}")


def cuts_to_composition(cuts: Sequence[int], n: int) -> tuple[int, ...]:
    edges = (0, *cuts, n)
    return tuple(b - a for a, b in zip(edges, edges[1:]))


def composition_to_cuts(parts: Sequence[int]) -> tuple[int, ...]:
    return tuple(itertools.accumulate(parts))[:-1]


def enumerate_compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Every composition of ``n`` into ``k`` positive parts, lexicographically.

    Compositions are generated from their cut sets ``0 < a_1 < ... < a_{k-1} < n``;
    lexicographic order on cut sets is lexicographic order on compositions.
    """
    _check_nk(n, k, 1)
    for cuts in itertools.combinations(range(1, n), k - 1):
        yield cuts_to_composition(cuts, n)


def _bad_indices(parts: Sequence[int], whole: int) -> list[int]:
    return [i for i, x in enumerate(parts) if 2 * x >= whole]


def broken_brick_oracle(n: int, k: int, budget: Optional[int] = None) -> ExactCount:
    """Count the compositions of ``n`` into ``k`` parts that are polygonal."""
    _check_nk(n, k, 3)
    _check_budget(comb(n - 1, k - 1), budget)
    total = good = 0
    bad = [0] * k
    for parts in enumerate_compositions(n, k):
        total += 1
        if is_polygonal(parts):
            good += 1
        else:
            hits = _bad_indices(parts, n)
            if len(hits) != 1:
                raise AssertionError(f"{parts}: {len(hits)} violating pieces")
            bad[hits[0]] += 1
    return ExactCount(total, good, Fraction(good, total), tuple(bad))


def count_bad_set(n: int, k: int, i: int, budget: Optional[int] = None) -> int:
    """Number of compositions of ``n`` into ``k`` parts whose piece ``i`` is >= n/2."""
    _check_nk(n, k, 3)
    if not 0 <= i < k:
        raise InvalidParams(f"index {i} out of range for k={k}")
    _check_budget(comb(n - 1, k - 1), budget)
    return sum(1 for parts in enumerate_compositions(n, k) if 2 * parts[i] >= n)


def _tuple_chunks(n: int, k: int) -> Iterator[np.ndarray]:
    """All of ``{1..n}^k`` as int64 rows, in row-major order, chunked."""
    size = n**k
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        cols = []
        for _ in range(k):
            idx, digit = np.divmod(idx, n)
            cols.append(digit + 1)
        yield np.stack(cols[::-1], axis=1)


def pickup_bricks_oracle(n: int, k: int, budget: Optional[int] = None) -> ExactCount:
    """Count the tuples in ``{1..n}^k`` that are polygonal.

    Also tallies, per index, the tuples in which that piece is too long. Each
    tally should equal C(n+1, k); see :func:`pickup_bijection_holds`.
    """
    _check_nk(n, k, 3, least_n=1)
    _check_budget(n**k, budget)
    good = 0
    bad = np.zeros(k, dtype=np.int64)
    for rows in _tuple_chunks(n, k):
        whole = rows.sum(axis=1, keepdims=True)
        violating = 2 * rows >= whole
        per_row = violating.sum(axis=1)
        if per_row.max() > 1:
            raise AssertionError("an outcome has two violating pieces")
        good += int((per_row == 0).sum())
        bad += violating.sum(axis=0)
    total = n**k
    return ExactCount(total, good, Fraction(good, total), tuple(int(b) for b in bad))


def pickup_bijection_holds(n: int, count: ExactCount) -> bool:
    """Whether every per-index bad tally equals C(n+1, k)."""
    k = len(count.bad_by_index)
    return all(b == comb(n + 1, k) for b in count.bad_by_index)


def _stick_profile(n: int, pieces: int) -> dict[tuple[int, int], tuple[Fraction, int]]:
    """Distribution of (length, longest piece) for one stick.

    The stick length is uniform on ``{pieces..n}`` and the cut set uniform
    given the length. Values are (probability, number of raw outcomes).
    """
    out: dict[tuple[int, int], list] = defaultdict(lambda: [Fraction(0), 0])
    lengths = n - pieces + 1
    for ell in range(pieces, n + 1):
        w = Fraction(1, lengths * comb(ell - 1, pieces - 1))
        for parts in enumerate_compositions(ell, pieces):
            slot = out[(ell, max(parts))]
            slot[0] += w
            slot[1] += 1
    return {key: (p, c) for key, (p, c) in out.items()}


def stick_lambda_brick_oracle(
    n: int, lam: Partition | Sequence[int], budget: Optional[int] = None
) -> ExactCount:
    """Exact probability for the discrete Stick(lambda) problem.

    Stick ``i`` has length uniform on ``{lam[i]..n}`` and is cut at a uniform
    set of ``lam[i]-1`` distinct interior integer points. Outcomes are grouped
    by (total length, longest piece), which is all the polygon test reads.
    """
    if not isinstance(lam, Partition):
        lam = Partition.from_parts(lam)
    if lam.k < 3:
        raise InvalidParams(f"need at least 3 pieces, got {lam.k}")
    if isinstance(n, bool) or not isinstance(n, int) or n < lam.parts[0]:
        raise InvalidParams(f"need n >= {lam.parts[0]}, got {n!r}")
    _check_budget(prod(comb(n, p) for p in lam.parts), budget)

    state: dict[tuple[int, int], tuple[Fraction, int]] = {(0, 0): (Fraction(1), 1)}
    for pieces in lam.parts:
        profile = _stick_profile(n, pieces)
        nxt: dict[tuple[int, int], list] = defaultdict(lambda: [Fraction(0), 0])
        for (s0, m0), (p0, c0) in state.items():
            for (s1, m1), (p1, c1) in profile.items():
                slot = nxt[(s0 + s1, max(m0, m1))]
                slot[0] += p0 * p1
                slot[1] += c0 * c1
        state = {key: (p, c) for key, (p, c) in nxt.items()}

    total = good = 0
    prob = Fraction(0)
    for (whole, longest), (p, c) in state.items():
        total += c
        if 2 * longest < whole:
            good += c
            prob += p
    return ExactCount(total, good, prob)
