"""
決定的なスキュー付きワークロード生成（Zipf 人気度・操作比率・人気度シフト・キーパターン/順序）
"""

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from config.settings import WORKLOAD_SETTINGS
from utils.errors import ConfigError
from utils.rng import Xoshiro256
from utils.validators import validate_workload_config

logger = logging.getLogger(__name__)


class OpKind(IntEnum):
    FETCH = 0
    INSERT = 1
    DELETE = 2


class Operation(NamedTuple):
    kind: OpKind
    key: int
    value: Optional[int] = None


@dataclass(frozen=True)
class WorkloadConfig:
    zipf: float = WORKLOAD_SETTINGS['zipf']
    initial_size: int = WORKLOAD_SETTINGS['initial_size']
    operation_count: int = WORKLOAD_SETTINGS['operation_count']
    fetch_proportion: float = WORKLOAD_SETTINGS['fetch_proportion']
    insert_proportion: float = WORKLOAD_SETTINGS['insert_proportion']
    delete_proportion: float = WORKLOAD_SETTINGS['delete_proportion']
    dist_shift_freq: int = WORKLOAD_SETTINGS['dist_shift_freq']
    dist_shift_prct: float = WORKLOAD_SETTINGS['dist_shift_prct']
    key_pattern: str = WORKLOAD_SETTINGS['key_pattern']
    key_order: str = WORKLOAD_SETTINGS['key_order']
    random_seed: int = WORKLOAD_SETTINGS['random_seed']

    def __post_init__(self):
        is_valid, errors = validate_workload_config(self)
        if not is_valid:
            raise ConfigError("; ".join(errors))


def zipf_weights(population, exponent):
    """順位 1..N の重み 1/i^s（s=0 は一様）"""
    ranks = np.arange(1, population + 1, dtype=np.float64)
    return ranks ** (-float(exponent))


def zipf_pmf(population, exponent):
    """p_i = (1/i^s) / H, H = Σ 1/j^s"""
    weights = zipf_weights(population, exponent)
    return weights / weights.sum()


class PopularityModel:
    """
    Zipf 人気度モデル

    順位上の確率分布は母集団サイズだけで決まり、キーとの対応（rank_to_key）だけが
    シフト・挿入・削除で変わる。サンプリングは累積重み配列の二分探索（O(log N)）。
    """

    def __init__(self, exponent, rank_to_key, key_pattern='random'):
        self.exponent = float(exponent)
        self.key_pattern = key_pattern
        self.rank_to_key = list(rank_to_key)
        self.key_set = set(self.rank_to_key)
        self._cum_weights = np.cumsum(zipf_weights(len(self.rank_to_key), self.exponent)).tolist()
        self._next_sequential = max(self.rank_to_key, default=0) + 1
        self.insertion_order = list(self.rank_to_key)

    @property
    def population(self):
        return len(self.rank_to_key)

    @property
    def total_weight(self):
        return self._cum_weights[-1] if self._cum_weights else 0.0

    def probabilities(self):
        """順位順の確率（numpy配列）"""
        return zipf_pmf(self.population, self.exponent)

    def probability_by_key(self):
        return dict(zip(self.rank_to_key, self.probabilities().tolist()))

    def rank_of(self, key):
        """キーの順位（1始まり）。O(N)"""
        return self.rank_to_key.index(key) + 1

    def sample_rank(self, rng):
        """順位（0始まり）を確率 p_r で引く"""
        target = rng.random() * self.total_weight
        index = bisect_right(self._cum_weights, target)
        return min(index, self.population - 1)

    def sample_key(self, rng):
        return self.rank_to_key[self.sample_rank(rng)]

    def churn_prefix_size(self, shift_prct):
        """累積確率が shift_prct% 以上になる最小の上位順位数 m"""
        target = shift_prct / 100.0 * self.total_weight
        return min(bisect_left(self._cum_weights, target) + 1, self.population)

    def fresh_key(self, rng):
        """現在存在しないキーを1つ作る"""
        if self.key_pattern == 'sequential':
            while self._next_sequential in self.key_set:
                self._next_sequential += 1
            key = self._next_sequential
            self._next_sequential += 1
            return key
        while True:
            key = rng.next_u64()
            if key not in self.key_set:
                return key

    def insert_key(self, rng, key):
        """
        新しいキーを一様に選んだ順位位置に入れる（O(1)）

        その位置にいたキーは最下位に移る。
        """
        position = rng.randbelow(self.population + 1)
        ranks = self.rank_to_key
        ranks.append(key)
        ranks[position], ranks[-1] = ranks[-1], ranks[position]
        self.key_set.add(key)
        self._cum_weights.append(self.total_weight + len(ranks) ** (-self.exponent))
        return position

    def remove_random_key(self, rng):
        """存在するキーを一様に1つ選んで取り除く（O(1)、最下位のキーがその順位に入る）"""
        ranks = self.rank_to_key
        position = rng.randbelow(len(ranks))
        ranks[position], ranks[-1] = ranks[-1], ranks[position]
        key = ranks.pop()
        self.key_set.remove(key)
        self._cum_weights.pop()
        return key


def generate_keys(config, rng):
    """key_pattern に従い initial_size 個の異なるキーを挿入順で作る"""
    if config.key_pattern == 'sequential':
        return list(range(1, config.initial_size + 1))

    keys = []
    seen = set()
    while len(keys) < config.initial_size:
        key = rng.next_u64()
        if key in seen:
            continue  # 重複は引き直す
        seen.add(key)
        keys.append(key)
    return keys


def build_model(config, rng=None):
    """
    人気度モデルを作成

    key_order='random' は挿入順をランダムに並べ替えて順位を割り当て、
    'sorted' は後に挿入したキーほど人気が高くなるよう割り当てる。
    """
    if rng is None:
        rng = Xoshiro256(config.random_seed)
    keys = generate_keys(config, rng)

    if config.key_order == 'sorted':
        rank_to_key = keys[::-1]
    else:
        rank_to_key = list(keys)
        rng.shuffle(rank_to_key)

    model = PopularityModel(config.zipf, rank_to_key, config.key_pattern)
    model.insertion_order = keys
    return model


def apply_churn(model, rng, shift_prct):
    """
    人気度シフト: 上位 m 件（累積確率 shift_prct%）を、それより下位の異なるキーとランダムに順位交換

    順位上の確率分布は変えず、rank_to_key だけを入れ替える。

    Returns:
    int - 上位から入れ替えた件数 m
    """
    if not 0 < shift_prct <= 100:
        raise ConfigError(f"dist_shift_prct は (0, 100] の範囲が必要です: {shift_prct}")

    population = model.population
    prefix = model.churn_prefix_size(shift_prct)
    candidates = population - prefix
    swaps = min(prefix, candidates)
    if swaps <= 0:
        return 0

    if swaps * 2 > candidates:
        pool = list(range(prefix, population))
        for i in range(swaps):
            j = i + rng.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        targets = pool[:swaps]
    else:
        chosen = set()
        targets = []
        while len(targets) < swaps:
            rank = prefix + rng.randbelow(candidates)
            if rank not in chosen:
                chosen.add(rank)
                targets.append(rank)

    ranks = model.rank_to_key
    for rank, target in enumerate(targets):
        ranks[rank], ranks[target] = ranks[target], ranks[rank]

    logger.debug("churn: replaced top %d of %d keys (%.1f%%)", swaps, population, shift_prct)
    return prefix


@dataclass
class Workload:
    config: WorkloadConfig
    preload: List[Tuple[int, int]]
    operations: Iterator[Operation]
    model: Optional[PopularityModel] = None


def _kind_thresholds(config):
    cumulative = 0.0
    thresholds = []
    for kind, proportion in (
        (OpKind.FETCH, config.fetch_proportion),
        (OpKind.INSERT, config.insert_proportion),
        (OpKind.DELETE, config.delete_proportion),
    ):
        if proportion > 0:
            cumulative += proportion
            thresholds.append((cumulative, kind))
    return thresholds


def iter_operations(config, model, rng):
    """
    操作列を生成（分布シフトは全操作を数えて dist_shift_freq 件ごと）

    削除対象がない場合は存在しないキーの fetch を出す。
    """
    thresholds = _kind_thresholds(config)
    last_kind = thresholds[-1][1]
    shift_freq = config.dist_shift_freq
    shift_enabled = shift_freq > 0 and config.dist_shift_prct > 0

    for index in range(config.operation_count):
        if shift_enabled and index > 0 and index % shift_freq == 0:
            apply_churn(model, rng, config.dist_shift_prct)

        draw = rng.random()
        kind = last_kind
        for threshold, candidate in thresholds:
            if draw < threshold:
                kind = candidate
                break

        if kind == OpKind.FETCH:
            if model.population == 0:
                yield Operation(OpKind.FETCH, model.fresh_key(rng))
            else:
                yield Operation(OpKind.FETCH, model.sample_key(rng))
        elif kind == OpKind.INSERT:
            key = model.fresh_key(rng)
            model.insert_key(rng, key)
            yield Operation(OpKind.INSERT, key, rng.next_u64())
        elif model.population == 0:
            yield Operation(OpKind.FETCH, model.fresh_key(rng))
        else:
            yield Operation(OpKind.DELETE, model.remove_random_key(rng))


def generate(config):
    """設定とシードから、事前投入データと操作列を決定的に生成"""
    rng = Xoshiro256(config.random_seed)
    model = build_model(config, rng)
    preload = [(key, rng.next_u64()) for key in model.insertion_order]
    return Workload(config, preload, iter_operations(config, model, rng), model)
