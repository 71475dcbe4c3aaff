import io
import math

import numpy as np
import pytest
from statsmodels.stats.proportion import proportion_confint

from polygon_odds import (
    InvalidParams,
    SimConfig,
    broken_brick_prob,
    broken_stick_prob,
    confidence_interval,
    is_polygonal,
    pickup_sticks_prob,
    simulate_brick_lambda,
    simulate_stick_lambda,
    stick_lambda_brick_oracle,
)
from polygon_odds.montecarlo import brick_pieces, shard_generator, shard_sizes, stick_pieces


def within(est, p, trials, sigmas=4.0):
    return abs(est.estimate - p) <= sigmas * math.sqrt(p * (1 - p) / trials)


class TestWilson:
    def test_half(self):
        lo, hi = confidence_interval(500_000, 1_000_000, 0.95)
        assert lo == pytest.approx(0.49902, abs=5e-6)
        assert hi == pytest.approx(0.50098, abs=5e-6)

    def test_zero_successes(self):
        lo, hi = confidence_interval(0, 100, 0.95)
        assert lo == 0.0
        assert hi == pytest.approx(0.0370, abs=5e-5)

    @pytest.mark.parametrize("conf", [0.5, 0.9, 0.99])
    def test_all_successes(self, conf):
        assert confidence_interval(40, 40, conf)[1] == 1.0

    @pytest.mark.parametrize("s, n, conf", [(3, 10, 0.95), (97, 100, 0.9), (1234, 5000, 0.99), (1, 2, 0.5)])
    def test_against_statsmodels(self, s, n, conf):
        want = proportion_confint(s, n, alpha=1 - conf, method="wilson")
        assert confidence_interval(s, n, conf) == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("args", [(5, 4, 0.95), (-1, 4, 0.95), (1, 0, 0.95), (1, 4, 1.0), (1, 4, 0.0)])
    def test_invalid(self, args):
        with pytest.raises(InvalidParams):
            confidence_interval(*args)


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(lam=(1, 1), trials=10),
            dict(lam=(3,), trials=4, shards=5),
            dict(lam=(3,), trials=10, shards=0),
            dict(lam=(3,), trials=10, seed=-1),
            dict(lam=(3,), trials=10, seed=2**64),
            dict(lam=(3,), trials=10, confidence=1.5),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParams):
            SimConfig(**kwargs)

    def test_unsorted_lambda(self):
        assert SimConfig((1, 3), trials=10).lam.parts == (3, 1)

    def test_brick_needs_long_enough_sticks(self):
        with pytest.raises(InvalidParams):
            simulate_brick_lambda(2, SimConfig((3,), trials=10))


class TestSampling:
    def test_shard_sizes(self):
        assert shard_sizes(10, 3) == [4, 3, 3]
        assert sum(shard_sizes(100_003, 8)) == 100_003

    def test_streams_are_spawned_children(self):
        from numpy.random import PCG64, Generator, SeedSequence

        children = SeedSequence(99).spawn(4)
        for s, child in enumerate(children):
            assert shard_generator(99, s).random(5).tolist() == Generator(PCG64(child)).random(5).tolist()

    def test_stick_pieces_shape_and_sums(self):
        rng = np.random.default_rng(0)
        pieces = stick_pieces(rng, (3, 2, 1), 1000)
        assert pieces.shape == (1000, 6)
        assert (pieces >= 0).all()
        assert (pieces[:, :3].sum(axis=1) <= 1.0 + 1e-12).all()

    def test_brick_cut_sets_are_uniform(self):
        rng = np.random.default_rng(3)
        pieces = brick_pieces(rng, (3,), 6, 120_000)
        assert (pieces >= 1).all()
        lengths = pieces.sum(axis=1)
        assert set(np.unique(lengths).tolist()) == {3, 4, 5, 6}
        # given length 6 there are C(5,2)=10 cut sets, each ~1/10
        sixes = pieces[lengths == 6]
        _, counts = np.unique(sixes, axis=0, return_counts=True)
        assert len(counts) == 10
        assert counts.min() > 0.9 * counts.mean()

    def test_trace_lists_failed_trials(self):
        buf = io.StringIO()
        est = simulate_stick_lambda(SimConfig((3,), trials=200, seed=5), trace=buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == est.trials - est.successes
        for line in lines:
            fields = dict(part.split("=", 1) for part in line.split(" lengths=")[0].split())
            lengths = [float(x) for x in line.split(" lengths=")[1].split()]
            assert not is_polygonal(lengths)
            assert 2 * lengths[int(fields["violator"])] >= sum(lengths)

    def test_debug_cross_checks_pass(self):
        simulate_stick_lambda(SimConfig((2, 1, 1), trials=3000, seed=8, shards=3), debug=True)
        simulate_brick_lambda(7, SimConfig((2, 2), trials=3000, seed=8, shards=2), debug=True)


class TestDeterminism:
    def test_same_inputs_same_counts(self):
        cfg = SimConfig((2, 2), trials=50_000, seed=7, shards=4)
        a = simulate_stick_lambda(cfg, workers=1)
        b = simulate_stick_lambda(cfg, workers=4)
        c = simulate_stick_lambda(cfg)
        assert a == b == c

    def test_brick_determinism(self):
        cfg = SimConfig((3, 1), trials=20_000, seed=11, shards=3)
        assert simulate_brick_lambda(8, cfg, workers=1) == simulate_brick_lambda(8, cfg, workers=3)

    def test_seed_matters(self):
        a = simulate_stick_lambda(SimConfig((4,), trials=20_000, seed=1))
        b = simulate_stick_lambda(SimConfig((4,), trials=20_000, seed=2))
        assert a.successes != b.successes

    def test_shard_sum_is_order_free(self):
        from polygon_odds.montecarlo import BLOCK, _run_shard

        draw = lambda rng, size: stick_pieces(rng, (2, 2), size)  # noqa: E731
        sizes = shard_sizes(30_001, 5)
        counts = [_run_shard(draw, 3, s, n, BLOCK, False, False)[0] for s, n in enumerate(sizes)]
        whole = simulate_stick_lambda(SimConfig((2, 2), trials=30_001, seed=3, shards=5))
        assert sum(counts) == sum(reversed(counts)) == whole.successes

    def test_estimate_inside_interval(self):
        est = simulate_stick_lambda(SimConfig((5,), trials=10_000, seed=4))
        assert est.ci_low <= est.estimate <= est.ci_high
        assert est.estimate == est.successes / est.trials


class TestAgreement:
    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_broken_stick(self, k):
        p = float(broken_stick_prob(k))
        est = simulate_stick_lambda(SimConfig((k,), trials=10**6, seed=2024, shards=4))
        assert within(est, p, est.trials)

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_pickup_sticks(self, k):
        p = float(pickup_sticks_prob(k))
        est = simulate_stick_lambda(SimConfig((1,) * k, trials=10**6, seed=2025, shards=4))
        assert within(est, p, est.trials)

    @pytest.mark.parametrize(
        "n, lam, exact",
        [
            (10, (3,), sum(broken_brick_prob(ell, 3) for ell in range(3, 11)) / 8),
            (2, (1, 1, 1), 0.625),
            (4, (3,), 0.5),
            (9, (2, 1, 1), stick_lambda_brick_oracle(9, (2, 1, 1)).probability),
        ],
    )
    def test_brick_model_matches_oracle(self, n, lam, exact):
        p = float(exact)
        est = simulate_brick_lambda(n, SimConfig(lam, trials=10**6, seed=31, shards=4))
        assert within(est, p, est.trials)

    def test_interval_coverage(self):
        hits = 0
        for seed in range(200):
            est = simulate_stick_lambda(SimConfig((4,), trials=10_000, seed=seed))
            hits += est.ci_low <= 0.5 <= est.ci_high
        assert hits >= 180
