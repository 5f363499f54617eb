"""
チェイン法ハッシュテーブル（8バイト整数キー・値）

エントリはarena（キー・値・次リンクの並列リスト）上のスロットとして確保し、
各バケットの先頭スロットからリンクをたどってチェインを構成する。
バケット数は常に2のべき乗で、負荷率を [0.5, 1.5] に保つよう倍増・半減する。
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

from config.settings import TABLE_SETTINGS
from config.constants import NIL
from utils.errors import ConfigError
from utils.hashing import hash_key, bucket_index
from utils.validators import validate_table_config

logger = logging.getLogger(__name__)

GROW = 'grow'
SHRINK = 'shrink'


@dataclass(frozen=True)
class TableConfig:
    bucket_count_log2: int = TABLE_SETTINGS['default_bucket_count_log2']
    load_factor_min: float = TABLE_SETTINGS['load_factor_min']
    load_factor_max: float = TABLE_SETTINGS['load_factor_max']
    hash_seed: int = TABLE_SETTINGS['hash_seed']

    def __post_init__(self):
        is_valid, errors = validate_table_config(self)
        if not is_valid:
            raise ConfigError("; ".join(errors))


class FetchResult(NamedTuple):
    found: bool
    value: Optional[int]
    displacement: int


class ChainedHashTable:
    """
    新規キーはチェインの先頭に挿入する。既存キーへの挿入は値のみ上書きし、位置は変えない。

    arena:
    heads: バケットごとの先頭スロット（空は NIL）
    keys / values / links: スロットごとのキー・値・次スロット
    """

    def __init__(self, config=None):
        self.config = config if config is not None else TableConfig()
        self.bucket_count_log2 = self.config.bucket_count_log2
        self.heads = [NIL] * (1 << self.bucket_count_log2)
        self.keys = []
        self.values = []
        self.links = []
        self._free_slots = []
        self.key_count = 0
        self.rehash_count = 0
        self.rehash_listeners = []

    @property
    def bucket_count(self):
        return 1 << self.bucket_count_log2

    @property
    def load_factor(self):
        return self.key_count / self.bucket_count

    def __len__(self):
        return self.key_count

    def __contains__(self, key):
        return self.fetch(key).found

    def bucket_of(self, key):
        return bucket_index(hash_key(key, self.config.hash_seed), self.bucket_count_log2)

    def fetch(self, key):
        """
        チェインを先頭からたどってキーを探す

        Returns:
        FetchResult - displacement は比較したエントリ数（見つからない場合はチェイン長）
        """
        slot = self.heads[self.bucket_of(key)]
        keys = self.keys
        links = self.links
        displacement = 0
        while slot != NIL:
            displacement += 1
            if keys[slot] == key:
                return FetchResult(True, self.values[slot], displacement)
            slot = links[slot]
        return FetchResult(False, None, displacement)

    def find_slot(self, key):
        """キーのスロットと直前スロットを返す（見つからない場合は (NIL, NIL)）"""
        slot = self.heads[self.bucket_of(key)]
        prev = NIL
        keys = self.keys
        links = self.links
        while slot != NIL:
            if keys[slot] == key:
                return slot, prev
            prev = slot
            slot = links[slot]
        return NIL, NIL

    def insert(self, key, value):
        """
        キーを挿入

        Returns:
        bool - 新規挿入なら True、既存キーの値を上書きした場合は False
        """
        slot, _ = self.find_slot(key)
        if slot != NIL:
            self.values[slot] = value
            return False

        if self.key_count + 1 > self.config.load_factor_max * self.bucket_count:
            self.rehash(GROW)

        bucket = self.bucket_of(key)
        slot = self._allocate(key, value)
        self.links[slot] = self.heads[bucket]
        self.heads[bucket] = slot
        self.key_count += 1
        return True

    def delete(self, key):
        """キーを削除し、残りのチェイン順序は保つ"""
        slot, prev = self.find_slot(key)
        if slot == NIL:
            return False

        if prev == NIL:
            self.heads[self.bucket_of(key)] = self.links[slot]
        else:
            self.links[prev] = self.links[slot]
        self._release(slot)
        self.key_count -= 1

        if self._below_min_load():
            self.rehash(SHRINK)
        return True

    def will_grow_on_insert(self, key):
        """insert(key) がバケット倍増を起こすか"""
        if self.key_count + 1 <= self.config.load_factor_max * self.bucket_count:
            return False
        return self.find_slot(key)[0] == NIL

    def will_shrink_on_delete(self, key):
        """delete(key) がバケット半減を起こすか"""
        if self.bucket_count_log2 <= TABLE_SETTINGS['min_bucket_count_log2']:
            return False
        if self.key_count - 1 >= self.config.load_factor_min * self.bucket_count:
            return False
        return self.find_slot(key)[0] != NIL

    def rehash(self, direction):
        """
        バケット数を倍増（grow）または半減（shrink）して全エントリを再リンク

        同じ新バケットに入るエントリの相対順序は旧チェインのたどり順を保つ（安定分割・併合）。
        """
        if direction == GROW:
            new_log2 = self.bucket_count_log2 + 1
        elif direction == SHRINK:
            new_log2 = max(self.bucket_count_log2 - 1, TABLE_SETTINGS['min_bucket_count_log2'])
        else:
            raise ValueError(f"未知の rehash 方向です: {direction}")

        old_heads = self.heads
        new_count = 1 << new_log2
        heads = [NIL] * new_count
        tails = [NIL] * new_count
        keys = self.keys
        links = self.links
        seed = self.config.hash_seed

        for head in old_heads:
            slot = head
            while slot != NIL:
                next_slot = links[slot]
                bucket = bucket_index(hash_key(keys[slot], seed), new_log2)
                links[slot] = NIL
                if tails[bucket] == NIL:
                    heads[bucket] = slot
                else:
                    links[tails[bucket]] = slot
                tails[bucket] = slot
                slot = next_slot

        old_count = self.bucket_count
        self.heads = heads
        self.bucket_count_log2 = new_log2
        self.rehash_count += 1
        logger.debug("rehash %s: %d -> %d buckets (keys=%d)", direction, old_count, new_count, self.key_count)

        for listener in self.rehash_listeners:
            listener(self, direction)

    def chain_slots(self, bucket):
        slots = []
        slot = self.heads[bucket]
        while slot != NIL:
            slots.append(slot)
            slot = self.links[slot]
        return slots

    def chain(self, bucket):
        """バケットのチェインをキーのリストで返す（先頭から）"""
        return [self.keys[slot] for slot in self.chain_slots(bucket)]

    def chains(self):
        return [self.chain(bucket) for bucket in range(self.bucket_count)]

    def items(self):
        for bucket in range(self.bucket_count):
            for slot in self.chain_slots(bucket):
                yield self.keys[slot], self.values[slot]

    def _below_min_load(self):
        if self.bucket_count_log2 <= TABLE_SETTINGS['min_bucket_count_log2']:
            return False
        return self.key_count < self.config.load_factor_min * self.bucket_count

    def _allocate(self, key, value):
        if self._free_slots:
            slot = self._free_slots.pop()
            self.keys[slot] = key
            self.values[slot] = value
            self.links[slot] = NIL
            return slot
        self.keys.append(key)
        self.values.append(value)
        self.links.append(NIL)
        return len(self.keys) - 1

    def _release(self, slot):
        self.links[slot] = NIL
        self._free_slots.append(slot)


def bucket_log2_for(key_count, load_factor):
    """
    key_count 件を入れたときの負荷率が load_factor に最も近くなるバケット数（log2）

    候補は負荷率が [load_factor_min, load_factor_max] に収まるものに限る。
    """
    lf_min = TABLE_SETTINGS['load_factor_min']
    lf_max = TABLE_SETTINGS['load_factor_max']
    floor_log2 = TABLE_SETTINGS['min_bucket_count_log2']
    if key_count <= 0:
        return floor_log2

    best = None
    for log2 in range(floor_log2, max(key_count, 2).bit_length() + 2):
        actual = key_count / (1 << log2)
        if actual > lf_max:
            continue
        if actual < lf_min and log2 > floor_log2:
            break
        gap = abs(actual - load_factor)
        if best is None or gap < best[0]:
            best = (gap, log2)
    return best[1] if best else floor_log2
