"""
learn+adapt モード

リクエスト数はメインテーブルと同じチェイン形状をもつ別構造（RequestCountTable）で数え、
fetch のたびに最大1回の交換でチェインをリクエスト数の降順へ確率的に並べ替える。
"""

import logging

from config.constants import NIL
from utils.chained_table import FetchResult

logger = logging.getLogger(__name__)


class RequestCountTable:
    """
    メインテーブルと同型のリクエスト計数テーブル

    バケット b のチェイン上 i 番目のノードが、メインテーブルのバケット b の i 番目のエントリに対応する。
    """

    def __init__(self, bucket_count):
        self.heads = [NIL] * bucket_count
        self.links = []
        self.counts = []
        self._free_nodes = []

    @classmethod
    def mirror(cls, table, counts_by_slot=None):
        """メインテーブルのチェイン形状を写した計数テーブルを作成（カウンタは0、または引き継ぎ）"""
        counters = cls(table.bucket_count)
        counters._copy_shape(table, counts_by_slot)
        return counters

    @property
    def node_count(self):
        return len(self.counts) - len(self._free_nodes)

    def rebuild(self, table, counts_by_slot):
        """rehash後のメインテーブルに合わせて作り直す（スロット単位でカウントを引き継ぐ）"""
        self.heads = [NIL] * table.bucket_count
        self.links = []
        self.counts = []
        self._free_nodes = []
        self._copy_shape(table, counts_by_slot)

    def counts_by_slot(self, table):
        """メインテーブルのスロット → カウント の対応（同型性を利用して並行にたどる）"""
        mapping = {}
        for bucket in range(table.bucket_count):
            slot = table.heads[bucket]
            node = self.heads[bucket]
            while slot != NIL:
                mapping[slot] = self.counts[node]
                slot = table.links[slot]
                node = self.links[node]
        return mapping

    def push_front(self, bucket, count=0):
        node = self._allocate(count)
        self.links[node] = self.heads[bucket]
        self.heads[bucket] = node
        return node

    def unlink(self, bucket, position):
        """バケット内 position 番目（0始まり）のノードを外す"""
        prev = NIL
        node = self.heads[bucket]
        for _ in range(position):
            prev = node
            node = self.links[node]
        if prev == NIL:
            self.heads[bucket] = self.links[node]
        else:
            self.links[prev] = self.links[node]
        self.links[node] = NIL
        self._free_nodes.append(node)

    def chain_counts(self, bucket):
        counts = []
        node = self.heads[bucket]
        while node != NIL:
            counts.append(self.counts[node])
            node = self.links[node]
        return counts

    def release(self):
        self.heads = []
        self.links = []
        self.counts = []
        self._free_nodes = []

    def _copy_shape(self, table, counts_by_slot):
        for bucket in range(table.bucket_count):
            tail = NIL
            slot = table.heads[bucket]
            while slot != NIL:
                count = counts_by_slot.get(slot, 0) if counts_by_slot else 0
                node = self._allocate(count)
                if tail == NIL:
                    self.heads[bucket] = node
                else:
                    self.links[tail] = node
                tail = node
                slot = table.links[slot]

    def _allocate(self, count):
        if self._free_nodes:
            node = self._free_nodes.pop()
            self.counts[node] = count
            self.links[node] = NIL
            return node
        self.counts.append(count)
        self.links.append(NIL)
        return len(self.counts) - 1


def reclaim_noop(region):
    """キャッシュ解放フック（既定は何もしない）"""


def begin_learn(table):
    """learn+adapt モード開始: 0初期化した同型の計数テーブルを作る"""
    counters = RequestCountTable.mirror(table)
    logger.debug("begin learn: %d buckets, %d counter nodes", table.bucket_count, counters.node_count)
    return counters


def fetch_adaptive(table, counters, key):
    """
    リクエストを数えながら fetch し、必要なら1回だけ交換する

    たどった前方区間（先頭を含む）で最小カウントのエントリを記録し（同数は最も前を保持）、
    取得したエントリのカウントがそれを上回れば、キー・値・カウントをまとめて交換する。
    """
    bucket = table.bucket_of(key)
    slot = table.heads[bucket]
    node = counters.heads[bucket]
    min_slot = slot
    min_node = node
    keys = table.keys
    links = table.links
    node_links = counters.links
    counts = counters.counts
    displacement = 0

    while slot != NIL and keys[slot] != key:
        displacement += 1
        if counts[node] < counts[min_node]:
            min_slot = slot
            min_node = node
        slot = links[slot]
        node = node_links[node]

    if slot == NIL:
        return FetchResult(False, None, displacement)

    displacement += 1
    values = table.values
    value = values[slot]
    counts[node] += 1
    if counts[node] > counts[min_node]:
        keys[slot], keys[min_slot] = keys[min_slot], keys[slot]
        values[slot], values[min_slot] = values[min_slot], values[slot]
        counts[node], counts[min_node] = counts[min_node], counts[node]
    return FetchResult(True, value, displacement)


def fetch_transpose(table, counters, key):
    """隣接交換版: 直前のエントリよりカウントが多ければそれとだけ交換する"""
    bucket = table.bucket_of(key)
    slot = table.heads[bucket]
    node = counters.heads[bucket]
    prev_slot = NIL
    prev_node = NIL
    keys = table.keys
    displacement = 0

    while slot != NIL and keys[slot] != key:
        displacement += 1
        prev_slot = slot
        prev_node = node
        slot = table.links[slot]
        node = counters.links[node]

    if slot == NIL:
        return FetchResult(False, None, displacement)

    displacement += 1
    values = table.values
    counts = counters.counts
    value = values[slot]
    counts[node] += 1
    if prev_slot != NIL and counts[node] > counts[prev_node]:
        keys[slot], keys[prev_slot] = keys[prev_slot], keys[slot]
        values[slot], values[prev_slot] = values[prev_slot], values[slot]
        counts[node], counts[prev_node] = counts[prev_node], counts[node]
    return FetchResult(True, value, displacement)


def insert_during_learn(table, counters, key, value):
    """先頭挿入に合わせてカウント0のノードを先頭に追加（rehash時は作り直す）"""
    if table.will_grow_on_insert(key):
        counts_by_slot = counters.counts_by_slot(table)
        table.insert(key, value)
        counters.rebuild(table, counts_by_slot)
        return True

    inserted = table.insert(key, value)
    if inserted:
        counters.push_front(table.bucket_of(key))
    return inserted


def delete_during_learn(table, counters, key):
    """エントリと対応する計数ノードをともに外す（rehash時は作り直す）"""
    if table.will_shrink_on_delete(key):
        counts_by_slot = counters.counts_by_slot(table)
        table.delete(key)
        counters.rebuild(table, counts_by_slot)
        return True

    bucket = table.bucket_of(key)
    position = 0
    slot = table.heads[bucket]
    while slot != NIL and table.keys[slot] != key:
        position += 1
        slot = table.links[slot]
    if slot == NIL:
        return False

    table.delete(key)
    counters.unlink(bucket, position)
    return True


def end_learn(table, counters, reclaim=None):
    """learn+adapt モード終了: 計数テーブルを解放しキャッシュ解放フックを呼ぶ（メインテーブルは変更しない）"""
    (reclaim or reclaim_noop)(counters)
    node_count = counters.node_count
    counters.release()
    logger.debug("end learn: released %d counter nodes (%d keys)", node_count, table.key_count)
