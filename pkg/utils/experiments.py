"""
ベンチマーク実行（エンジン作成・バッチ再生・実験プリセットの展開）
"""

import logging
import time
from dataclasses import asdict, dataclass, field, replace
from itertools import islice
from typing import List, Optional, Tuple

from config.settings import (
    BATCH_SETTINGS,
    CHURN_CADENCE,
    EXPERIMENT_PRESETS,
    SCALE_PRESETS,
    TABLE_SETTINGS,
)
from config.constants import (
    COUNTER17_MAX,
    ENGINE_COUNTER17,
    ENGINE_DEFAULT,
    ENGINE_VIP,
    ENGINE_VIP_PRECONFIGURED,
    NIL,
)
from utils.chained_table import ChainedHashTable, FetchResult, TableConfig, bucket_log2_for
from utils.controller import Mode, OpResult, VipEngine
from utils.errors import ConfigError
from utils.validators import validate_experiment_spec
from utils.workload import OpKind, WorkloadConfig, build_model, generate
from utils.workload_io import read_workload

logger = logging.getLogger(__name__)


class StaticEngine:
    """構成を変えないエンジン（default / vip-preconfigured / counter17）。全操作を default モードとして数える"""

    def __init__(self, table):
        self.table = table
        self.op_index = 0
        self.event_sink = []
        self.occupancy = {mode: 0 for mode in Mode}

    @property
    def mode(self):
        return Mode.DEFAULT

    def step(self, op):
        table = self.table
        if op.kind == OpKind.FETCH:
            result = table.fetch(op.key)
            outcome = OpResult(result.found, result.value, result.displacement, Mode.DEFAULT)
        elif op.kind == OpKind.INSERT:
            outcome = OpResult(table.insert(op.key, op.value), None, 0, Mode.DEFAULT)
        else:
            outcome = OpResult(table.delete(op.key), None, 0, Mode.DEFAULT)
        self.occupancy[Mode.DEFAULT] += 1
        self.op_index += 1
        return outcome


class Counter17Table(ChainedHashTable):
    """エントリごとに1バイトの飽和リクエストカウンタをもつテーブル（17バイトエントリ）"""

    def __init__(self, config=None):
        super().__init__(config)
        self.request_counts = []

    def fetch(self, key):
        slot = self.heads[self.bucket_of(key)]
        keys = self.keys
        links = self.links
        displacement = 0
        while slot != NIL:
            displacement += 1
            if keys[slot] == key:
                if self.request_counts[slot] < COUNTER17_MAX:
                    self.request_counts[slot] += 1
                return FetchResult(True, self.values[slot], displacement)
            slot = links[slot]
        return FetchResult(False, None, displacement)

    def _allocate(self, key, value):
        slot = super()._allocate(key, value)
        if slot == len(self.request_counts):
            self.request_counts.append(0)
        else:
            self.request_counts[slot] = 0
        return slot


def build_vip_preconfigured(model, table, values=None):
    """
    人気度の低い順にキーを挿入し、各チェインを人気度の降順にする

    先頭挿入なので、最後に入れた（最も人気の高い）キーがチェイン先頭に来る。
    """
    if len(table) != 0:
        raise ConfigError("VIP事前配置には空のテーブルが必要です")
    values = values or {}
    for key in reversed(model.rank_to_key):
        table.insert(key, values.get(key, 0))
    return table


def expected_displacement(table, probability_by_key):
    """現在のチェイン順での期待 displacement E[D] = Σ p(key) × チェイン上の位置"""
    total = 0.0
    for chain in table.chains():
        for position, key in enumerate(chain, start=1):
            total += probability_by_key.get(key, 0.0) * position
    return total


def optimal_expected_displacement(table, probability_by_key):
    """各チェインを確率の降順に並べたときの E[D]（配置の最小値）"""
    total = 0.0
    for chain in table.chains():
        ordered = sorted((probability_by_key.get(key, 0.0) for key in chain), reverse=True)
        total += sum(p * position for position, p in enumerate(ordered, start=1))
    return total


@dataclass
class BatchMetrics:
    batch_index: int
    ops: int
    elapsed_ns: int
    total_displacement: int
    hit_count: int
    miss_count: int
    mode_ops: dict
    trigger_events: list = field(default_factory=list)
    warmup: bool = False

    @property
    def throughput_ops_s(self):
        return self.ops / (max(self.elapsed_ns, 1) / 1e9)

    @property
    def avg_displacement(self):
        """成功した fetch あたりの displacement"""
        return self.total_displacement / self.hit_count if self.hit_count else 0.0

    @property
    def learn_triggers(self):
        return sum(1 for event in self.trigger_events if event.to_mode is Mode.LEARN_ADAPT)

    @property
    def sense_triggers(self):
        return sum(1 for event in self.trigger_events if event.to_mode is Mode.SENSE)


@dataclass
class TrialResult:
    experiment: str
    engine: str
    seed: int
    batches: List[BatchMetrics]
    events: list
    final_table: Optional[ChainedHashTable] = field(default=None, repr=False)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    workload: WorkloadConfig
    engines: Tuple[str, ...]
    seeds: Tuple[int, ...]
    scale: str = 'desk'
    load_factor: float = 0.95
    batch_size: int = BATCH_SETTINGS['batch_size']
    bucket_count_log2: Optional[int] = None
    workload_file: Optional[str] = None

    def __post_init__(self):
        is_valid, errors = validate_experiment_spec(self)
        if not is_valid:
            raise ConfigError("; ".join(errors))

    @property
    def table_log2(self):
        if self.bucket_count_log2 is not None:
            return self.bucket_count_log2
        return bucket_log2_for(self.workload.initial_size, self.load_factor)

    @property
    def variant_label(self):
        return f"zipf{self.workload.zipf:g}_lf{self.load_factor:g}"


def make_engine(kind, workload, bucket_count_log2):
    """事前投入済みのエンジンを作成"""
    config = TableConfig(bucket_count_log2=bucket_count_log2, hash_seed=TABLE_SETTINGS['hash_seed'])

    if kind == ENGINE_COUNTER17:
        table = Counter17Table(config)
    else:
        table = ChainedHashTable(config)

    if kind == ENGINE_VIP_PRECONFIGURED:
        model = workload.model if workload.model is not None else build_model(workload.config)
        build_vip_preconfigured(model, table, dict(workload.preload))
    else:
        for key, value in workload.preload:
            table.insert(key, value)

    if kind == ENGINE_VIP:
        return VipEngine.from_table(table, event_sink=[])
    if kind in (ENGINE_DEFAULT, ENGINE_VIP_PRECONFIGURED, ENGINE_COUNTER17):
        return StaticEngine(table)
    raise ConfigError(f"未知のエンジンです: {kind}")


def replay(engine, operations, batch_size=BATCH_SETTINGS['batch_size'], on_result=None):
    """
    操作列を batch_size 件ずつ実行し、バッチごとの計測値を返すジェネレータ

    計時は各バッチを実体化した後の実行部分のみ（単調時計）。
    on_result を渡すと (op, OpResult) ごとに呼ぶ（計時に含まれる）。
    """
    operations = iter(operations)
    events = engine.event_sink
    batch_index = 0

    while True:
        batch = list(islice(operations, batch_size))
        if not batch:
            return

        occupancy_before = dict(engine.occupancy)
        event_mark = len(events)
        total_displacement = 0
        hits = 0
        misses = 0
        step = engine.step

        start = time.perf_counter_ns()
        for op in batch:
            result = step(op)
            if op.kind == OpKind.FETCH:
                if result.found:
                    hits += 1
                    total_displacement += result.displacement
                else:
                    misses += 1
            if on_result is not None:
                on_result(op, result)
        elapsed_ns = time.perf_counter_ns() - start

        yield BatchMetrics(
            batch_index=batch_index,
            ops=len(batch),
            elapsed_ns=elapsed_ns,
            total_displacement=total_displacement,
            hit_count=hits,
            miss_count=misses,
            mode_ops={mode: engine.occupancy[mode] - occupancy_before[mode] for mode in Mode},
            trigger_events=list(events[event_mark:]),
            warmup=batch_index == 0 and BATCH_SETTINGS['flag_warmup_batch'],
        )
        batch_index += 1


def load_trial_workload(spec, seed):
    if spec.workload_file:
        return read_workload(spec.workload_file)
    return generate(replace(spec.workload, random_seed=seed))


def run_trial(spec, engine_kind, seed, keep_table=False):
    """1つの (エンジン, シード) を実行"""
    workload = load_trial_workload(spec, seed)
    engine = make_engine(engine_kind, workload, spec.table_log2)
    logger.info(
        "trial start: %s engine=%s seed=%d buckets=2^%d keys=%d",
        spec.name, engine_kind, seed, engine.table.bucket_count_log2, len(engine.table)
    )

    batches = list(replay(engine, workload.operations, spec.batch_size))

    total_ops = sum(batch.ops for batch in batches)
    total_ns = sum(batch.elapsed_ns for batch in batches)
    logger.info(
        "trial end: %s engine=%s seed=%d ops=%d elapsed=%.2fs learn_episodes=%s",
        spec.name, engine_kind, seed, total_ops, total_ns / 1e9, getattr(engine, 'learn_episodes', '-')
    )
    return TrialResult(
        experiment=spec.name,
        engine=engine_kind,
        seed=seed,
        batches=batches,
        events=list(engine.event_sink),
        final_table=engine.table if keep_table else None,
    )


def run_experiment(spec):
    """spec の全 (エンジン, シード) を実行して TrialResult のリストを返す"""
    return [run_trial(spec, engine_kind, seed) for engine_kind in spec.engines for seed in spec.seeds]


def expand_preset(name, scale='desk', workload_overrides=None, engines=None, seeds=None,
                  batch_size=None, load_factors=None, zipf_values=None, workload_file=None):
    """
    実験プリセットを (Zipf, 負荷率) ごとの ExperimentSpec に展開

    roofline 系はバケット数を 2^bucket_count_log2 に固定し、初期キー数を 負荷率 × バケット数 とする。
    """
    if name not in EXPERIMENT_PRESETS or name == 'join':
        raise ConfigError(f"点クエリ実験ではありません: {name}")
    if scale not in SCALE_PRESETS:
        raise ConfigError(f"未知のスケールです: {scale}")

    preset = EXPERIMENT_PRESETS[name]
    scale_preset = SCALE_PRESETS[scale]
    overrides = dict(workload_overrides or {})

    base = {
        'initial_size': scale_preset['initial_size'],
        'operation_count': scale_preset['operation_count'],
        'fetch_proportion': preset.get('fetch_proportion', 1.0),
        'insert_proportion': preset.get('insert_proportion', 0.0),
        'delete_proportion': preset.get('delete_proportion', 0.0),
        'key_order': preset.get('key_order', 'random'),
    }
    if 'churn_cadence' in preset:
        base['dist_shift_freq'] = CHURN_CADENCE[preset['churn_cadence']][scale]
        base['dist_shift_prct'] = preset['dist_shift_prct']
    base.update(overrides)

    if workload_file:
        # 保存済みワークロードの設定をそのまま使う
        file_config = read_workload(workload_file).config
        base = asdict(file_config)
        zipf_values = [base.pop('zipf')]
        overrides = {'initial_size': file_config.initial_size}
        seeds = [file_config.random_seed]

    fixed_buckets = name.startswith('roofline')
    specs = []
    for zipf in zipf_values or preset['zipf_values'][scale]:
        for load_factor in load_factors or preset['load_factors']:
            workload_fields = dict(base, zipf=zipf)
            bucket_count_log2 = None
            if fixed_buckets:
                bucket_count_log2 = scale_preset['bucket_count_log2']
                if 'initial_size' not in overrides:
                    workload_fields['initial_size'] = round(load_factor * (1 << bucket_count_log2))
            specs.append(ExperimentSpec(
                name=name,
                workload=WorkloadConfig(**workload_fields),
                engines=tuple(engines or preset['engines']),
                seeds=tuple(scale_preset['seeds'] if seeds is None else seeds),
                scale=scale,
                load_factor=load_factor,
                batch_size=batch_size or BATCH_SETTINGS['batch_size'],
                bucket_count_log2=bucket_count_log2,
                workload_file=workload_file,
            ))
    return specs
