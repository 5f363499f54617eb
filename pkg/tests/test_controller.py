import logging
import re

import pytest

from config.constants import ENGINE_VIP
from utils.chained_table import ChainedHashTable, TableConfig
from utils.controller import (
    ControllerParams,
    Mode,
    SenseRole,
    VipEngine,
    learn_budget_for,
    new_engine,
    overhead_cap,
)
from utils.errors import ConfigError
from utils.experiments import make_engine, replay
from utils.workload import OpKind, Operation, WorkloadConfig, generate


def fetch(key):
    return Operation(OpKind.FETCH, key)


def two_key_engine(colliding_keys, sense_span=10, **overrides):
    """バケット0に [A, B] が並ぶ log2=1 のテーブルと VIP エンジン"""
    a, b = colliding_keys(1, 2)
    table = ChainedHashTable(TableConfig(bucket_count_log2=1))
    table.insert(b, b)
    table.insert(a, a)
    assert table.chain(0) == [a, b]
    events = []
    params = ControllerParams.for_bucket_count(table.bucket_count, sense_span=sense_span, **overrides)
    engine = VipEngine.from_table(table, params, event_sink=events)
    return engine, events, a, b


class TestParams:

    def test_budgets_at_million_buckets(self):
        params = ControllerParams.for_bucket_count(1 << 20)
        assert params.learn_budget == 1_572_864
        assert params.default_span == 94_371_840
        assert params.sense_span == 1000
        assert params.confidence == 0.95

    def test_budget_rounds_up(self):
        assert learn_budget_for(2) == 3
        assert learn_budget_for(1) == 2

    def test_sense_span_override(self):
        params = ControllerParams.for_bucket_count(16, sense_span=50)
        assert params.sense_span == 50
        assert params.learn_budget == 24

    def test_rescaled_keeps_ratio(self):
        params = ControllerParams.for_bucket_count(2).rescaled(4)
        assert params.learn_budget == 6
        assert params.default_span == 360

    @pytest.mark.parametrize("overrides", [
        {'sense_span': 1},
        {'confidence': 1.0},
        {'slowdown_factor': 0.5},
        {'max_sense_extensions': -1},
    ])
    def test_rejects_invalid(self, overrides):
        with pytest.raises(ConfigError):
            ControllerParams.for_bucket_count(8, **overrides)

    def test_rejects_inconsistent_default_span(self):
        with pytest.raises(ConfigError):
            ControllerParams(learn_budget=3, default_span=100)


class TestOverheadCap:

    def test_default_parameters(self):
        params = ControllerParams.for_bucket_count(1 << 10)
        assert overhead_cap(params) == pytest.approx(3 / 64)

    def test_no_slowdown(self):
        params = ControllerParams.for_bucket_count(8, slowdown_factor=1)
        assert overhead_cap(params) == pytest.approx(0.0)

    def test_short_default_span(self):
        params = ControllerParams(learn_budget=1, default_span=10, default_ratio=10)
        assert overhead_cap(params) == pytest.approx(1 - 11 / 14)


class TestModeCycle:

    def test_starts_in_learn(self):
        engine = new_engine(TableConfig(bucket_count_log2=1))
        assert engine.mode is Mode.LEARN_ADAPT
        assert engine.state.remaining == 3
        assert engine.learn_episodes == 1

    def test_learn_lasts_exactly_budget(self):
        table = ChainedHashTable(TableConfig(bucket_count_log2=1))
        table.insert(7, 70)
        events = []
        engine = VipEngine.from_table(table, event_sink=events)

        modes = [engine.step(fetch(7)).mode for _ in range(4)]

        assert modes == [Mode.LEARN_ADAPT] * 3 + [Mode.SENSE]
        assert events[0].op_index == 2
        assert (events[0].from_mode, events[0].to_mode) == (Mode.LEARN_ADAPT, Mode.SENSE)
        assert events[0].sense_role is SenseRole.BASELINE
        assert engine.counters is None

    def test_learn_reorders_chain(self, colliding_keys):
        engine, _, a, b = two_key_engine(colliding_keys)
        result = engine.step(fetch(b))
        assert result.found and result.displacement == 2
        assert engine.table.chain(0) == [b, a]

    def test_unchanged_distribution_returns_to_default(self, colliding_keys):
        engine, events, _, b = two_key_engine(colliding_keys)

        for _ in range(203):
            engine.step(fetch(b))

        assert [event.to_mode for event in events] == [Mode.SENSE, Mode.DEFAULT, Mode.SENSE, Mode.DEFAULT]
        assert [event.op_index for event in events] == [2, 12, 192, 202]
        last = events[-1]
        assert last.baseline == last.current
        assert engine.learn_episodes == 1

    def test_shifted_distribution_triggers_learn(self, colliding_keys):
        engine, events, a, b = two_key_engine(colliding_keys)

        for _ in range(193):
            engine.step(fetch(b))
        for _ in range(10):
            engine.step(fetch(a))

        assert [(event.from_mode, event.to_mode) for event in events] == [
            (Mode.LEARN_ADAPT, Mode.SENSE),
            (Mode.SENSE, Mode.DEFAULT),
            (Mode.DEFAULT, Mode.SENSE),
            (Mode.SENSE, Mode.LEARN_ADAPT),
        ]
        assert [event.sense_role for event in events] == [
            SenseRole.BASELINE, SenseRole.BASELINE, SenseRole.COMPARE, SenseRole.COMPARE
        ]
        relearn = events[-1]
        assert relearn.op_index == 202
        assert relearn.baseline.u == pytest.approx(1.0)
        assert relearn.current.u == pytest.approx(2.0)
        assert engine.mode is Mode.LEARN_ADAPT
        assert engine.state.remaining == 3
        assert engine.learn_episodes == 2

        engine.step(fetch(a))
        assert engine.table.chain(0) == [a, b]

    def test_occupancy_counts_every_op(self, colliding_keys):
        engine, _, _, b = two_key_engine(colliding_keys)
        for _ in range(50):
            engine.step(fetch(b))
        assert engine.occupancy == {Mode.LEARN_ADAPT: 3, Mode.SENSE: 10, Mode.DEFAULT: 37}
        assert engine.op_index == 50

    def test_misses_count_toward_window_only(self, colliding_keys):
        engine, events, _, b = two_key_engine(colliding_keys)
        for _ in range(3):
            engine.step(fetch(b))
        engine.step(fetch(max(engine.table.chain(0)) + 1000))
        for _ in range(9):
            engine.step(fetch(b))

        assert engine.mode is Mode.DEFAULT
        assert events[-1].baseline.u == pytest.approx(1.0)

    def test_all_miss_window_falls_back_to_default(self, colliding_keys, caplog):
        engine, events, a, b = two_key_engine(colliding_keys)
        absent = max(a, b) + 1
        while absent in engine.table:
            absent += 1
        for _ in range(3):
            engine.step(fetch(b))

        with caplog.at_level(logging.WARNING, logger='utils.controller'):
            for _ in range(109):
                engine.step(fetch(absent))
            assert engine.mode is Mode.SENSE
            engine.step(fetch(absent))

        assert engine.mode is Mode.DEFAULT
        assert events[-1].to_mode is Mode.DEFAULT
        assert events[-1].baseline is None
        assert "falling back" in caplog.text

    def test_relearn_drops_stale_baseline(self, colliding_keys):
        engine, events, a, b = two_key_engine(colliding_keys, max_sense_extensions=0)
        absent = max(a, b) + 1
        while absent in engine.table:
            absent += 1

        for _ in range(193):
            engine.step(fetch(b))
        for _ in range(10):
            engine.step(fetch(a))
        assert events[-1].to_mode is Mode.LEARN_ADAPT
        assert engine.state.baseline is None

        for _ in range(3):
            engine.step(fetch(a))
        for _ in range(10):
            engine.step(fetch(absent))
        assert engine.mode is Mode.DEFAULT
        assert engine.state.baseline is None

        for _ in range(190):
            engine.step(fetch(a))
        last = events[-1]
        assert last.op_index == 405
        assert (last.from_mode, last.to_mode) == (Mode.SENSE, Mode.DEFAULT)
        assert last.baseline.u == pytest.approx(1.0)
        assert engine.state.baseline == last.baseline
        assert engine.learn_episodes == 2


class TestMutations:

    def test_insert_and_delete_during_learn(self):
        engine = new_engine(TableConfig(bucket_count_log2=2))
        assert engine.step(Operation(OpKind.INSERT, 5, 50)).found
        assert engine.step(Operation(OpKind.INSERT, 6, 60)).found
        assert engine.step(Operation(OpKind.DELETE, 5)).found
        assert not engine.step(Operation(OpKind.DELETE, 5)).found
        assert engine.step(fetch(6)).value == 60

    def test_rehash_rescales_without_resetting_countdown(self):
        engine = new_engine(TableConfig(bucket_count_log2=1))
        for key in (1, 2, 3):
            engine.step(Operation(OpKind.INSERT, key, key))
        assert engine.mode is Mode.SENSE
        assert engine.state.remaining == 1000

        engine.step(Operation(OpKind.INSERT, 4, 4))

        assert engine.table.bucket_count_log2 == 2
        assert engine.params.learn_budget == 6
        assert engine.params.default_span == 360
        assert engine.state.remaining == 999

    def test_rehash_during_learn_keeps_learning(self):
        params = ControllerParams(learn_budget=20, default_span=1200)
        engine = new_engine(TableConfig(bucket_count_log2=2), params)
        for key in range(1, 7):
            engine.step(Operation(OpKind.INSERT, key, key))

        engine.step(Operation(OpKind.INSERT, 7, 7))

        assert engine.mode is Mode.LEARN_ADAPT
        assert engine.table.bucket_count_log2 == 3
        assert engine.params.learn_budget == 12
        assert engine.params.default_span == 720
        assert engine.counters.node_count == 7
        assert engine.state.remaining == 13


MODE_LETTERS = {Mode.LEARN_ADAPT: 'L', Mode.SENSE: 'S', Mode.DEFAULT: 'D'}
# L (S D S (L S D S)*)* を任意の位置で打ち切ったもの。変化なしの比較の後は D に戻る
MODE_SEQUENCE = re.compile(r'L(?:SD(?:SD)*SL)*(?:SD(?:SD)*S?|S)?')


def mode_sequence(events):
    return 'L' + ''.join(MODE_LETTERS[event.to_mode] for event in events)


def assert_well_formed(events):
    assert MODE_SEQUENCE.fullmatch(mode_sequence(events))
    for event in events:
        if event.to_mode is Mode.SENSE:
            expected = SenseRole.BASELINE if event.from_mode is Mode.LEARN_ADAPT else SenseRole.COMPARE
            assert event.sense_role is expected
        elif event.to_mode is Mode.LEARN_ADAPT:
            assert event.sense_role is SenseRole.COMPARE
            assert event.baseline is not None and event.current is not None


def alternating_hot_key(a, b, op_index, cycle=203, compare_from=193):
    """各サイクルの比較窓だけ次のホットキーを引く（b, a, b, ... の順）"""
    phase = op_index // cycle + (1 if op_index % cycle >= compare_from else 0)
    return b if phase % 2 == 0 else a


class TestModeSequence:

    def test_pattern_accepts_truncated_cycles(self):
        for text in ('L', 'LS', 'LSD', 'LSDS', 'LSDSD', 'LSDSLS', 'LSDSDSLSDS'):
            assert MODE_SEQUENCE.fullmatch(text), text
        for text in ('LD', 'LSS', 'LSDL', 'LSDSLD', 'SDS'):
            assert not MODE_SEQUENCE.fullmatch(text), text

    def test_alternating_hot_key_relearns_every_cycle(self, colliding_keys):
        engine, events, a, b = two_key_engine(colliding_keys)

        for op_index in range(2030):
            engine.step(fetch(alternating_hot_key(a, b, op_index)))

        assert mode_sequence(events) == 'L' + 'SDSL' * 10
        assert_well_formed(events)
        assert [event.op_index for event in events if event.to_mode is Mode.LEARN_ADAPT] == [
            202 + 203 * cycle for cycle in range(10)
        ]
        assert engine.learn_episodes == 11

    @pytest.mark.parametrize("seed", [0, 1])
    def test_churned_run(self, seed):
        config = WorkloadConfig(
            initial_size=200, operation_count=150_000, zipf=1.0,
            dist_shift_freq=10_000, dist_shift_prct=25.0, random_seed=seed
        )
        workload = generate(config)
        engine = make_engine(ENGINE_VIP, workload, 8)

        for op in workload.operations:
            engine.step(op)

        events = engine.event_sink
        assert_well_formed(events)
        compares = [event for event in events if event.to_mode is Mode.SENSE and event.sense_role is SenseRole.COMPARE]
        assert len(compares) >= 5


class TestBudgetAccounting:

    def test_learn_share_on_fixed_stream(self, colliding_keys):
        engine, _, _, b = two_key_engine(colliding_keys)
        total = 100 * engine.params.learn_budget

        for _ in range(total):
            engine.step(fetch(b))

        assert engine.occupancy[Mode.LEARN_ADAPT] == engine.params.learn_budget
        assert engine.occupancy[Mode.LEARN_ADAPT] / total == 0.01
        assert engine.learn_episodes == 1

    @pytest.mark.parametrize("seed", range(4))
    def test_learn_ops_equal_budget_on_static_uniform(self, seed):
        workload = generate(WorkloadConfig(initial_size=200, operation_count=38_400, zipf=0.0, random_seed=seed))
        engine = make_engine(ENGINE_VIP, workload, 8)
        assert 100 * engine.params.learn_budget == 38_400

        batches = list(replay(engine, workload.operations, batch_size=4800))

        assert sum(batch.mode_ops[Mode.LEARN_ADAPT] for batch in batches) == engine.params.learn_budget
        assert sum(batch.learn_triggers for batch in batches) == 0
        assert engine.learn_episodes == 1
