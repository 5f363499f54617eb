import numpy as np
import pytest
from scipy import stats

from utils.hashing import hash_key, bucket_index
from utils.rng import Xoshiro256


class TestHashKey:

    def test_deterministic(self):
        rng = Xoshiro256(7)
        for _ in range(1000):
            key = rng.next_u64()
            seed = rng.next_u64()
            assert hash_key(key, seed) == hash_key(key, seed)

    def test_output_is_u64(self):
        for key in (0, 1, 2 ** 63, 2 ** 64 - 1):
            assert 0 <= hash_key(key) < 2 ** 64

    def test_seed_changes_output(self):
        assert hash_key(12345, 0) != hash_key(12345, 1)

    def test_bucket_distribution_is_uniform(self):
        rng = Xoshiro256(1)
        log2 = 16
        counts = np.zeros(1 << log2, dtype=np.int64)
        for _ in range(100_000):
            counts[bucket_index(hash_key(rng.next_u64()), log2)] += 1
        _, p_value = stats.chisquare(counts)
        assert p_value > 0.001

    def test_sequential_keys_spread(self):
        log2 = 10
        counts = np.zeros(1 << log2, dtype=np.int64)
        for key in range(1, 50_001):
            counts[bucket_index(hash_key(key), log2)] += 1
        _, p_value = stats.chisquare(counts)
        assert p_value > 0.001

    @pytest.mark.parametrize("bit", [0, 7, 31, 32, 63])
    def test_avalanche(self, bit):
        rng = Xoshiro256(bit + 100)
        flipped = []
        for _ in range(10_000):
            key = rng.next_u64()
            diff = hash_key(key) ^ hash_key(key ^ (1 << bit))
            flipped.append(bin(diff).count('1'))
        assert abs(np.mean(flipped) - 32) <= 4


class TestBucketIndex:

    def test_mask_low_bits(self):
        assert bucket_index(0b1011, 2) == 3

    def test_high_bits_ignored(self):
        assert bucket_index(2 ** 40, 20) == 0

    def test_all_ones(self):
        assert bucket_index(0xFFFF_FFFF_FFFF_FFFF, 20) == 2 ** 20 - 1
