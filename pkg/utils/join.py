"""
PK-FK ハッシュ結合の実験

R（主キー 1..|R|）でハッシュ表を構築し、Zipf で偏った外部キーをもつ S で probe する。
VIP では probe 開始から N_L = min(|R|, floor(|S|/61)) 件だけ learn+adapt を行い、残りは通常の fetch。
S は i.i.d. なので sense は行わない。
"""

import logging
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from config.settings import JOIN_SETTINGS, TABLE_SETTINGS
from config.constants import ENGINE_DEFAULT, ENGINE_VIP
from utils.adaptive import begin_learn, fetch_adaptive, end_learn
from utils.chained_table import ChainedHashTable, TableConfig, bucket_log2_for
from utils.errors import ConfigError, JoinIntegrity
from utils.rng import Xoshiro256
from utils.validators import validate_join_config
from utils.workload import PopularityModel

logger = logging.getLogger(__name__)

JOIN_ENGINES = (ENGINE_DEFAULT, ENGINE_VIP)


@dataclass
class Relation:
    """(key, payload) のタプル列。role は 'PK' または 'FK'"""
    tuples: List[Tuple[int, int]]
    role: str

    def __len__(self):
        return len(self.tuples)

    def keys(self):
        return [key for key, _ in self.tuples]


@dataclass(frozen=True)
class JoinConfig:
    pk_cardinality: int = JOIN_SETTINGS['pk_cardinality']
    ratio: int = JOIN_SETTINGS['ratio']
    zipf: float = JOIN_SETTINGS['zipf']
    load_factor: float = JOIN_SETTINGS['load_factor']
    random_seed: int = JOIN_SETTINGS['random_seed']

    def __post_init__(self):
        is_valid, errors = validate_join_config(self)
        if not is_valid:
            raise ConfigError("; ".join(errors))

    @property
    def fk_cardinality(self):
        return self.pk_cardinality * self.ratio


@dataclass
class JoinReport:
    engine: str
    seed: int
    zipf: float
    pk_cardinality: int
    fk_cardinality: int
    bucket_count_log2: int
    build_ns: int
    probe_ns: int
    learn_ns: int
    learn_budget: int
    total_displacement: int
    output_cardinality: int
    output: Optional[List[Tuple[int, int]]] = field(repr=False, default=None)

    @property
    def avg_displacement(self):
        return self.total_displacement / self.fk_cardinality if self.fk_cardinality else 0.0


@dataclass
class JoinComparison:
    config: JoinConfig
    reports: List[JoinReport]
    summary: dict


def learn_budget_for_join(pk_cardinality, fk_cardinality):
    """N_L = min(|R|, floor(|S| / 61))"""
    return min(pk_cardinality, fk_cardinality // JOIN_SETTINGS['learn_divisor'])


def generate_relations(config):
    """
    R（キー 1..|R|）と S（R のキーから Zipf(s) で抽出）を生成

    順位とキーの対応は R のキーを乱数で並べ替えて決める。
    """
    rng = Xoshiro256(config.random_seed)
    pk_keys = list(range(1, config.pk_cardinality + 1))
    r = Relation([(key, rng.next_u64()) for key in pk_keys], 'PK')

    rank_to_key = list(pk_keys)
    rng.shuffle(rank_to_key)
    model = PopularityModel(config.zipf, rank_to_key, key_pattern='sequential')
    s = Relation([(model.sample_key(rng), rng.next_u64()) for _ in range(config.fk_cardinality)], 'FK')
    return r, s


def _build(r, bucket_count_log2):
    table = ChainedHashTable(TableConfig(bucket_count_log2=bucket_count_log2, hash_seed=TABLE_SETTINGS['hash_seed']))
    for index, (key, _) in enumerate(r.tuples):
        table.insert(key, index)
    return table


def hash_join(r, s, engine_kind=ENGINE_DEFAULT, load_factor=JOIN_SETTINGS['load_factor'], seed=0, zipf=0.0,
              keep_output=True):
    """
    ハッシュ結合（構築: R を先頭挿入、probe: S の各タプル）

    出力はタプルの組 (R の添字, S の添字)。keep_output=False では件数だけをレポートに残す。

    Raises:
    JoinIntegrity - probe キーが R に存在しない
    """
    if engine_kind not in JOIN_ENGINES:
        raise ConfigError(f"結合では default / vip のみ指定できます: {engine_kind}")

    bucket_count_log2 = bucket_log2_for(len(r), load_factor)

    start = time.perf_counter_ns()
    table = _build(r, bucket_count_log2)
    build_ns = time.perf_counter_ns() - start

    output = []
    total_displacement = 0
    learn_budget = learn_budget_for_join(len(r), len(s)) if engine_kind == ENGINE_VIP else 0
    fetch = table.fetch

    start = time.perf_counter_ns()
    learn_ns = 0
    if learn_budget:
        counters = begin_learn(table)
        for s_index in range(learn_budget):
            key = s.tuples[s_index][0]
            result = fetch_adaptive(table, counters, key)
            if not result.found:
                raise JoinIntegrity(key, s_index)
            total_displacement += result.displacement
            output.append((result.value, s_index))
        end_learn(table, counters)
        learn_ns = time.perf_counter_ns() - start

    for s_index in range(learn_budget, len(s)):
        key = s.tuples[s_index][0]
        result = fetch(key)
        if not result.found:
            raise JoinIntegrity(key, s_index)
        total_displacement += result.displacement
        output.append((result.value, s_index))
    probe_ns = time.perf_counter_ns() - start

    report = JoinReport(
        engine=engine_kind, seed=seed, zipf=zipf,
        pk_cardinality=len(r), fk_cardinality=len(s), bucket_count_log2=bucket_count_log2,
        build_ns=build_ns, probe_ns=probe_ns, learn_ns=learn_ns,
        learn_budget=learn_budget, total_displacement=total_displacement,
        output_cardinality=len(output), output=output if keep_output else None
    )
    logger.debug(
        "join %s seed=%d: |R|=%d |S|=%d avg_disp=%.4f probe=%.1fms",
        engine_kind, seed, len(r), len(s), report.avg_displacement, probe_ns / 1e6
    )
    return report


def nested_loop_join(r, s):
    """検証用の入れ子ループ結合（|S| が小さい場合のみ）"""
    return [
        (r_index, s_index)
        for s_index, (s_key, _) in enumerate(s.tuples)
        for r_index, (r_key, _) in enumerate(r.tuples)
        if r_key == s_key
    ]


def _relative(value, base):
    return (value - base) / base if base else 0.0


def compare_join(config, seeds=None):
    """
    同じ乱数データで default と VIP の結合を比較

    Returns:
    JoinComparison - seed ごとのレポートと、時間・displacement の中央値・相対差
    """
    if seeds is None:
        seeds = list(range(JOIN_SETTINGS['seed_count']))

    reports = []
    for seed in seeds:
        seeded = replace(config, random_seed=seed)
        r, s = generate_relations(seeded)
        for engine_kind in JOIN_ENGINES:
            reports.append(hash_join(
                r, s, engine_kind, seeded.load_factor, seed=seed, zipf=seeded.zipf, keep_output=False
            ))

    summary = {}
    for engine_kind in JOIN_ENGINES:
        rows = [report for report in reports if report.engine == engine_kind]
        summary[engine_kind] = {
            'median_probe_ns': float(np.median([report.probe_ns for report in rows])),
            'median_total_ns': float(np.median([report.build_ns + report.probe_ns for report in rows])),
            'median_avg_displacement': float(np.median([report.avg_displacement for report in rows])),
        }
    base = summary[ENGINE_DEFAULT]
    vip = summary[ENGINE_VIP]
    summary['time_delta'] = _relative(vip['median_total_ns'], base['median_total_ns'])
    summary['displacement_delta'] = _relative(vip['median_avg_displacement'], base['median_avg_displacement'])

    logger.info(
        "join comparison zipf=%.2f: time %+.1f%%, displacement %+.1f%%",
        config.zipf, summary['time_delta'] * 100, summary['displacement_delta'] * 100
    )
    return JoinComparison(config, reports, summary)
