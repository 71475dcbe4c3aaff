"""Seeded, sharded Monte Carlo estimates for Stick(lambda) problems.

Random streams
--------------
Shard ``s`` of a run with master seed ``seed`` draws from
``numpy.random.Generator(PCG64(SeedSequence(seed, spawn_key=(s,))))``, which
is exactly the stream ``SeedSequence(seed).spawn(shards)[s]`` would give.
Shard ``s`` runs ``trials // shards`` trials, plus one if
``s < trials % shards``, in blocks of at most ``BLOCK`` trials. Within a
block, sticks are drawn in partition order; each stick draws its length
first and then its cut points. Successes are integer counts summed over
shards, so the result does not depend on which worker ran which shard.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Optional, Sequence, TextIO

import numpy as np

from .errors import InvalidParams
from .oracle import Partition
from .polygon import is_polygonal

BLOCK = 1 << 16
SEED_LIMIT = 1 << 64
# power of two, so scaling is exact in binary floating point
DEBUG_SCALE = 4.0


@dataclass(frozen=True)
class SimConfig:
    lam: Partition
    trials: int
    seed: int = 0
    shards: int = 1
    confidence: float = 0.95

    def __post_init__(self):
        if not isinstance(self.lam, Partition):
            object.__setattr__(self, "lam", Partition.from_parts(self.lam))
        if self.lam.k < 3:
            raise InvalidParams(f"need at least 3 pieces in total, got {self.lam.k}")
        if not isinstance(self.shards, int) or self.shards < 1:
            raise InvalidParams(f"shards must be a positive integer, got {self.shards!r}")
        if not isinstance(self.trials, int) or self.trials < self.shards:
            raise InvalidParams(f"trials must be an integer >= shards, got {self.trials!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < SEED_LIMIT:
            raise InvalidParams(f"seed must be an integer in [0, 2**64), got {self.seed!r}")
        if not 0 < self.confidence < 1:
            raise InvalidParams(f"confidence must lie in (0, 1), got {self.confidence!r}")


@dataclass(frozen=True)
class SimEstimate:
    trials: int
    successes: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int
    shards: int

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "seed": self.seed,
            "shards": self.shards,
        }


def confidence_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if not isinstance(trials, int) or trials < 1:
        raise InvalidParams(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(successes, int) or not 0 <= successes <= trials:
        raise InvalidParams(f"successes must lie in [0, {trials}], got {successes!r}")
    if not 0 < confidence < 1:
        raise InvalidParams(f"confidence must lie in (0, 1), got {confidence!r}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = successes / trials
    z2n = z * z / trials
    center = (p + z2n / 2) / (1 + z2n)
    margin = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    lo = 0.0 if successes == 0 else max(0.0, center - margin)
    hi = 1.0 if successes == trials else min(1.0, center + margin)
    return lo, hi


def shard_generator(seed: int, shard: int) -> np.random.Generator:
    """The random stream owned by one shard."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(shard,))))


def shard_sizes(trials: int, shards: int) -> list[int]:
    base, extra = divmod(trials, shards)
    return [base + (1 if s < extra else 0) for s in range(shards)]


def stick_pieces(rng: np.random.Generator, parts: Sequence[int], size: int) -> np.ndarray:
    """Piece lengths for ``size`` continuous trials, shape ``(size, k)``."""
    blocks = []
    for pieces in parts:
        length = 1.0 - rng.random(size)  # (0, 1]
        if pieces == 1:
            blocks.append(length[:, None])
            continue
        cuts = np.sort(rng.random((size, pieces - 1)), axis=1)
        edges = np.concatenate([np.zeros((size, 1)), cuts, np.ones((size, 1))], axis=1)
        blocks.append(np.diff(edges, axis=1) * length[:, None])
    return np.concatenate(blocks, axis=1)


def brick_pieces(rng: np.random.Generator, parts: Sequence[int], n: int, size: int) -> np.ndarray:
    """Integer piece lengths for ``size`` discrete trials.

    Stick length is uniform on ``{pieces..n}``; the cut set is the
    ``pieces-1`` interior positions with the smallest random keys, which is a
    uniform subset of the ``length-1`` admissible positions.
    """
    blocks = []
    positions = np.arange(1, n, dtype=np.int64)
    for pieces in parts:
        length = rng.integers(pieces, n + 1, size=size, dtype=np.int64)
        if pieces == 1:
            blocks.append(length[:, None])
            continue
        keys = rng.random((size, n - 1))
        keys[positions[None, :] >= length[:, None]] = 2.0
        chosen = np.argpartition(keys, pieces - 2, axis=1)[:, : pieces - 1]
        cuts = np.sort(positions[chosen], axis=1)
        edges = np.concatenate([np.zeros((size, 1), dtype=np.int64), cuts, length[:, None]], axis=1)
        blocks.append(np.diff(edges, axis=1))
    return np.concatenate(blocks, axis=1)


def polygon_mask(pieces: np.ndarray) -> np.ndarray:
    """Row-wise polygon test: every piece strictly below half the row total."""
    return 2 * pieces.max(axis=1) < pieces.sum(axis=1)


def _check_block(pieces: np.ndarray, ok: np.ndarray) -> None:
    scaled = polygon_mask(pieces * DEBUG_SCALE)
    if not np.array_equal(ok, scaled):
        raise AssertionError("polygon test changed under uniform rescaling")
    for row, flag in zip(pieces.tolist(), ok.tolist()):
        if is_polygonal(row) != flag:
            raise AssertionError(f"vectorized test disagrees with is_polygonal on {row}")


def _run_shard(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    seed: int,
    shard: int,
    trials: int,
    block: int,
    debug: bool,
    tracing: bool,
) -> tuple[int, list[str]]:
    rng = shard_generator(seed, shard)
    successes = 0
    lines: list[str] = []
    done = 0
    while done < trials:
        size = min(block, trials - done)
        pieces = draw(rng, size)
        ok = polygon_mask(pieces)
        if debug:
            _check_block(pieces, ok)
        if tracing:
            for t in np.flatnonzero(~ok).tolist():
                row = pieces[t]
                lengths = " ".join(repr(v) for v in row.tolist())
                lines.append(f"shard={shard} trial={done + t} violator={int(row.argmax())} lengths={lengths}")
        successes += int(ok.sum())
        done += size
    return successes, lines


def _simulate(
    cfg: SimConfig,
    draw: Callable[[np.random.Generator, int], np.ndarray],
    block: int,
    workers: Optional[int],
    trace: Optional[TextIO],
    debug: bool,
) -> SimEstimate:
    sizes = shard_sizes(cfg.trials, cfg.shards)
    args = [(draw, cfg.seed, s, size, block, debug, trace is not None) for s, size in enumerate(sizes)]
    if workers is None:
        workers = min(cfg.shards, os.cpu_count() or 1)
    if workers <= 1 or cfg.shards == 1:
        results = [_run_shard(*a) for a in args]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: _run_shard(*a), args))
    successes = sum(r[0] for r in results)
    if trace is not None:
        for _, lines in results:
            for line in lines:
                print(line, file=trace)
    lo, hi = confidence_interval(successes, cfg.trials, cfg.confidence)
    return SimEstimate(
        trials=cfg.trials,
        successes=successes,
        estimate=successes / cfg.trials,
        ci_low=lo,
        ci_high=hi,
        seed=cfg.seed,
        shards=cfg.shards,
    )


def simulate_stick_lambda(
    cfg: SimConfig,
    *,
    workers: Optional[int] = None,
    trace: Optional[TextIO] = None,
    debug: bool = False,
) -> SimEstimate:
    """Estimate the continuous Stick(lambda) probability.

    Each trial picks ``m`` stick lengths uniform on (0, 1], breaks stick ``i``
    at ``lam[i]-1`` independent uniform points and tests the pieces. The
    result depends only on ``(lam, trials, seed, shards)``; ``workers`` only
    changes how shards are scheduled.

    ``trace`` receives one line per failed trial. ``debug`` re-checks every
    block against :func:`is_polygonal` and against a rescaled copy.
    """
    parts = cfg.lam.parts
    return _simulate(cfg, lambda rng, size: stick_pieces(rng, parts, size), BLOCK, workers, trace, debug)


def simulate_brick_lambda(
    n: int,
    cfg: SimConfig,
    *,
    workers: Optional[int] = None,
    trace: Optional[TextIO] = None,
    debug: bool = False,
) -> SimEstimate:
    """Sampling counterpart of :func:`~polygon_odds.oracle.stick_lambda_brick_oracle`."""
    if isinstance(n, bool) or not isinstance(n, int) or n < cfg.lam.parts[0]:
        raise InvalidParams(f"need n >= {cfg.lam.parts[0]}, got {n!r}")
    parts = cfg.lam.parts
    block = max(256, min(BLOCK, (1 << 22) // n))
    return _simulate(cfg, lambda rng, size: brick_pieces(rng, parts, n, size), block, workers, trace, debug)
