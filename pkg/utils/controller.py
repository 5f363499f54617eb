"""
VIP ハッシュのモード状態機械

learn+adapt → sense（基準 γ_B）→ default（N_D 件）→ sense（現在 γ_C）→ 比較 を繰り返し、
分布変化を検出したときだけ再学習する。rehash のたびに N_L と N_D をバケット数に合わせて再計算する。
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Optional

from config.settings import CONTROLLER_SETTINGS
from utils.adaptive import (
    begin_learn,
    fetch_adaptive,
    insert_during_learn,
    delete_during_learn,
    end_learn,
)
from utils.chained_table import ChainedHashTable
from utils.errors import ConfigError, InsufficientSamples
from utils.sensing import SenseAccumulator, SenseStats, has_distribution_changed
from utils.validators import validate_controller_params
from utils.workload import OpKind

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    LEARN_ADAPT = 'learn'
    SENSE = 'sense'
    DEFAULT = 'default'


class SenseRole(str, Enum):
    BASELINE = 'baseline'
    COMPARE = 'compare'


def learn_budget_for(bucket_count, learn_factor=CONTROLLER_SETTINGS['learn_factor']):
    """N_L = ceil(1.5 × バケット数)"""
    return math.ceil(learn_factor * bucket_count)


@dataclass(frozen=True)
class ControllerParams:
    learn_budget: int
    default_span: int
    sense_span: int = CONTROLLER_SETTINGS['sense_span']
    confidence: float = CONTROLLER_SETTINGS['confidence']
    slowdown_factor: float = CONTROLLER_SETTINGS['slowdown_factor']
    learn_factor: float = CONTROLLER_SETTINGS['learn_factor']
    default_ratio: int = CONTROLLER_SETTINGS['default_ratio']
    max_sense_extensions: int = CONTROLLER_SETTINGS['max_sense_extensions']

    def __post_init__(self):
        is_valid, errors = validate_controller_params(self)
        if not is_valid:
            raise ConfigError("; ".join(errors))

    @classmethod
    def for_bucket_count(cls, bucket_count, **overrides):
        """バケット数から N_L と N_D を決めたパラメータを作成"""
        learn_factor = overrides.pop('learn_factor', CONTROLLER_SETTINGS['learn_factor'])
        default_ratio = overrides.pop('default_ratio', CONTROLLER_SETTINGS['default_ratio'])
        learn_budget = learn_budget_for(bucket_count, learn_factor)
        return cls(
            learn_budget=learn_budget,
            default_span=default_ratio * learn_budget,
            learn_factor=learn_factor,
            default_ratio=default_ratio,
            **overrides
        )

    def rescaled(self, bucket_count):
        """rehash 後のバケット数に合わせて N_L・N_D を再計算（比率 N_D/N_L は保つ）"""
        learn_budget = learn_budget_for(bucket_count, self.learn_factor)
        return replace(self, learn_budget=learn_budget, default_span=self.default_ratio * learn_budget)


def overhead_cap(params):
    """
    学習による最悪スループット低下の上限 1 - (N_D + N_L) / (N_D + k·N_L)

    N_D = 60·N_L, k = 4 で 1 - 61/64 ≈ 4.69%
    """
    n_d = params.default_span
    n_l = params.learn_budget
    return 1.0 - (n_d + n_l) / (n_d + params.slowdown_factor * n_l)


@dataclass
class ModeState:
    mode: Mode
    remaining: int
    baseline: Optional[SenseStats] = None
    pending_sense_role: SenseRole = SenseRole.BASELINE


class TriggerEvent(NamedTuple):
    """モード遷移（op_index は遷移を起こした操作の通し番号、0始まり）"""
    op_index: int
    from_mode: Mode
    to_mode: Mode
    sense_role: Optional[SenseRole] = None
    baseline: Optional[SenseStats] = None
    current: Optional[SenseStats] = None


class OpResult(NamedTuple):
    found: bool
    value: Optional[int]
    displacement: int
    mode: Mode


@dataclass
class VipEngine:
    """
    VIP ハッシュエンジン

    すべての操作をモードの残り件数に数え、sense 統計には成功した fetch だけを加える。
    """
    table: ChainedHashTable
    params: ControllerParams
    event_sink: Optional[list] = None
    reclaim: Optional[object] = None
    state: ModeState = field(init=False)
    counters: Optional[object] = field(init=False, default=None)
    op_index: int = field(init=False, default=0)
    learn_episodes: int = field(init=False, default=0)
    occupancy: dict = field(init=False)

    def __post_init__(self):
        self.accumulator = None
        self._extensions = 0
        self.occupancy = {mode: 0 for mode in Mode}
        self.table.rehash_listeners.append(self._on_table_rehash)
        self.state = ModeState(mode=Mode.LEARN_ADAPT, remaining=self.params.learn_budget)
        self.counters = begin_learn(self.table)
        self.learn_episodes = 1

    @classmethod
    def from_table(cls, table, params=None, **kwargs):
        if params is None:
            params = ControllerParams.for_bucket_count(table.bucket_count)
        return cls(table=table, params=params, **kwargs)

    @property
    def mode(self):
        return self.state.mode

    def step(self, op):
        """
        操作を現在のモードで実行し、残り件数が尽きたら次のモードへ遷移する

        Returns:
        OpResult - insert/delete では found に挿入・削除の成否が入り displacement は0
        """
        mode = self.state.mode
        table = self.table

        if op.kind == OpKind.FETCH:
            if mode is Mode.LEARN_ADAPT:
                result = fetch_adaptive(table, self.counters, op.key)
            else:
                result = table.fetch(op.key)
                if mode is Mode.SENSE and result.found:
                    self.accumulator.record_fetch(result.displacement)
            outcome = OpResult(result.found, result.value, result.displacement, mode)
        elif op.kind == OpKind.INSERT:
            if mode is Mode.LEARN_ADAPT:
                done = insert_during_learn(table, self.counters, op.key, op.value)
            else:
                done = table.insert(op.key, op.value)
            outcome = OpResult(done, None, 0, mode)
        else:
            if mode is Mode.LEARN_ADAPT:
                done = delete_during_learn(table, self.counters, op.key)
            else:
                done = table.delete(op.key)
            outcome = OpResult(done, None, 0, mode)

        self.occupancy[mode] += 1
        self.state.remaining -= 1
        if self.state.remaining <= 0:
            self._advance()
        self.op_index += 1
        return outcome

    def on_rehash(self):
        """rehash 直後に N_L・N_D を再計算（実行中モードの残り件数はそのまま）"""
        old = self.params
        self.params = self.params.rescaled(self.table.bucket_count)
        logger.debug(
            "rehash at op %d: N_L %d -> %d, N_D %d -> %d",
            self.op_index, old.learn_budget, self.params.learn_budget, old.default_span, self.params.default_span
        )

    def _on_table_rehash(self, table, direction):
        self.on_rehash()

    def _advance(self):
        mode = self.state.mode
        if mode is Mode.LEARN_ADAPT:
            end_learn(self.table, self.counters, self.reclaim)
            self.counters = None
            self._enter_sense(SenseRole.BASELINE, mode)
        elif mode is Mode.DEFAULT:
            self._enter_sense(SenseRole.COMPARE, mode)
        else:
            self._finish_sense()

    def _enter_sense(self, role, from_mode):
        self.state.mode = Mode.SENSE
        self.state.pending_sense_role = role
        self.state.remaining = self.params.sense_span
        self.accumulator = SenseAccumulator(confidence=self.params.confidence)
        self._extensions = 0
        self._emit(from_mode, Mode.SENSE, role)

    def _enter_default(self, **gammas):
        self.state.mode = Mode.DEFAULT
        self.state.remaining = self.params.default_span
        self._emit(Mode.SENSE, Mode.DEFAULT, self.state.pending_sense_role, **gammas)

    def _enter_learn(self, **gammas):
        self.counters = begin_learn(self.table)
        self.learn_episodes += 1
        self.state.mode = Mode.LEARN_ADAPT
        self.state.remaining = self.params.learn_budget
        # 学習で配置が変わるので次の sense で γ_B を取り直す
        self.state.baseline = None
        self._emit(Mode.SENSE, Mode.LEARN_ADAPT, SenseRole.COMPARE, **gammas)

    def _finish_sense(self):
        try:
            gamma = self.accumulator.finalize()
        except InsufficientSamples:
            if self._extensions < self.params.max_sense_extensions:
                self._extensions += 1
                self.state.remaining = self.params.sense_span
                logger.debug("sense window extended (%d) at op %d", self._extensions, self.op_index)
                return
            logger.warning("sense window without samples after %d extensions; falling back to default", self._extensions)
            self._enter_default()
            return

        role = self.state.pending_sense_role
        baseline = self.state.baseline
        if role is SenseRole.BASELINE or baseline is None:
            self.state.baseline = gamma
            self._enter_default(baseline=gamma)
            return

        if has_distribution_changed(baseline, gamma):
            logger.debug("distribution change at op %d: baseline=%s current=%s", self.op_index, baseline, gamma)
            self._enter_learn(baseline=baseline, current=gamma)
        else:
            self._enter_default(baseline=baseline, current=gamma)

    def _emit(self, from_mode, to_mode, role=None, baseline=None, current=None):
        event = TriggerEvent(self.op_index, from_mode, to_mode, role, baseline, current)
        if self.event_sink is not None:
            self.event_sink.append(event)


def new_engine(table_config, params=None, **kwargs):
    """空のテーブルから VIP エンジンを作成（learn+adapt、残り N_L で開始）"""
    table = ChainedHashTable(table_config)
    return VipEngine.from_table(table, params, **kwargs)
