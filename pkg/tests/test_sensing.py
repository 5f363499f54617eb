import math

import numpy as np
import pytest

from utils.chained_table import ChainedHashTable, TableConfig
from utils.errors import InsufficientSamples
from utils.experiments import build_vip_preconfigured
from utils.rng import Xoshiro256
from utils.sensing import (
    SenseAccumulator,
    SenseStats,
    finalize,
    has_distribution_changed,
    sample_variance,
)
from utils.workload import PopularityModel, apply_churn


def accumulate(displacements, confidence=0.95):
    acc = SenseAccumulator(confidence=confidence)
    for displacement in displacements:
        acc.record_fetch(int(displacement))
    return acc


class TestFinalize:

    def test_constant_window(self):
        stats = finalize(accumulate([3, 3, 3]))
        assert stats == SenseStats(3.0, 0.0)

    def test_two_samples(self):
        acc = accumulate([2, 3])
        assert (acc.cumulative_disp, acc.cumulative_disp_sq, acc.count) == (5, 13, 2)

        stats = acc.finalize()

        assert sample_variance(acc) == pytest.approx(0.5)
        assert stats.u == pytest.approx(2.5)
        assert stats.w == pytest.approx(1.22387, abs=1e-5)

    def test_full_window(self):
        acc = SenseAccumulator(cumulative_disp=3000, cumulative_disp_sq=12996, count=1000)
        stats = finalize(acc)
        assert sample_variance(acc) == pytest.approx(4.0)
        assert stats.u == pytest.approx(3.0)
        assert stats.w == pytest.approx(0.154809, abs=1e-6)

    def test_width_follows_confidence(self):
        displacements = [1, 2, 2, 3, 5, 1, 1, 4]
        narrow = finalize(accumulate(displacements, confidence=0.5))
        wide = finalize(accumulate(displacements, confidence=0.99))
        assert narrow.u == wide.u
        assert narrow.w < wide.w

    def test_rounding_below_zero_is_clamped(self):
        acc = SenseAccumulator(cumulative_disp=3, cumulative_disp_sq=4, count=2)
        assert sample_variance(acc) == 0.0
        assert finalize(acc).w == 0.0

    @pytest.mark.parametrize("displacements", [[], [4]])
    def test_insufficient_samples(self, displacements):
        with pytest.raises(InsufficientSamples):
            finalize(accumulate(displacements))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_two_pass_statistics(self, seed):
        rng = np.random.default_rng(seed)
        displacements = rng.integers(1, 12, size=1000)

        acc = accumulate(displacements)
        stats = finalize(acc)

        assert stats.u == pytest.approx(displacements.mean(), rel=1e-12)
        assert sample_variance(acc) == pytest.approx(displacements.var(ddof=1), rel=1e-9)
        expected_w = math.sqrt(-2.0 * displacements.var(ddof=1) * math.log(0.05) / 1000)
        assert stats.w == pytest.approx(expected_w, rel=1e-9)


class TestCoverage:

    def test_interval_covers_true_mean(self):
        rng = np.random.default_rng(7)
        support = np.arange(1, 6)
        probs = np.array([0.5, 0.2, 0.15, 0.1, 0.05])
        true_mean = float((support * probs).sum())

        covered = 0
        windows = 300
        for _ in range(windows):
            stats = finalize(accumulate(rng.choice(support, size=1000, p=probs)))
            covered += abs(stats.u - true_mean) <= stats.w

        assert covered / windows >= 0.90


class TestDistributionChange:

    def test_separated_intervals(self):
        assert has_distribution_changed(SenseStats(1.0, 0.25), SenseStats(1.5, 0.125))

    def test_touching_intervals_are_unchanged(self):
        assert not has_distribution_changed(SenseStats(1.0, 0.25), SenseStats(1.5, 0.25))

    def test_symmetric(self):
        a = SenseStats(2.0, 0.5)
        b = SenseStats(3.25, 0.5)
        assert has_distribution_changed(a, b) == has_distribution_changed(b, a)

    def test_identical_windows(self):
        stats = SenseStats(1.75, 0.0)
        assert not has_distribution_changed(stats, stats)


@pytest.fixture(scope='module')
def converged_table():
    """Zipf(1) の 20480 キーを人気度順に並べた 2^14 バケットのテーブル（負荷率 1.25）"""
    keys = list(range(1, 20_481))
    Xoshiro256(2024).shuffle(keys)
    model = PopularityModel(1.0, keys)
    table = build_vip_preconfigured(model, ChainedHashTable(TableConfig(bucket_count_log2=14)))
    return model, table


def sense_window(table, model, rng, samples):
    acc = SenseAccumulator()
    for _ in range(samples):
        acc.record_fetch(table.fetch(model.sample_key(rng)).displacement)
    return acc.finalize()


def detection_counts(model, table, samples, events):
    """(静的な窓の組での誤検出数, 25% シフト後の検出数)"""
    false_triggers = 0
    detections = 0
    for seed in range(events):
        rng = Xoshiro256(seed)
        baseline = sense_window(table, model, rng, samples)
        false_triggers += has_distribution_changed(baseline, sense_window(table, model, rng, samples))

        churned = PopularityModel(model.exponent, model.rank_to_key)
        assert apply_churn(churned, rng, 25) == 8
        detections += has_distribution_changed(baseline, sense_window(table, churned, rng, samples))
    return false_triggers, detections


class TestDetectionRates:

    def test_static_pairs_rarely_trigger(self, converged_table):
        model, table = converged_table
        changed = 0
        for seed in range(100):
            rng = Xoshiro256(seed)
            baseline = sense_window(table, model, rng, 1000)
            changed += has_distribution_changed(baseline, sense_window(table, model, rng, 1000))
        assert changed <= 10

    @pytest.mark.slow
    def test_quarter_churn_detected_with_long_windows(self, converged_table):
        model, table = converged_table
        false_triggers, detections = detection_counts(model, table, 20_000, 100)
        assert false_triggers <= 10
        assert detections >= 90
