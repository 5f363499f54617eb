import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from utils.chained_table import ChainedHashTable, TableConfig  # noqa: E402


def find_colliding_keys(bucket_count_log2, count, bucket=0, start=1):
    """指定バケットに入るキーを count 個探す"""
    scratch = ChainedHashTable(TableConfig(bucket_count_log2=bucket_count_log2))
    keys = []
    key = start
    while len(keys) < count:
        if scratch.bucket_of(key) == bucket:
            keys.append(key)
        key += 1
    return keys


@pytest.fixture
def colliding_keys():
    return find_colliding_keys


@pytest.fixture
def small_table():
    """4バケットのテーブル（キー 1..5、値はキーの10倍）"""
    table = ChainedHashTable(TableConfig(bucket_count_log2=2))
    for key in range(1, 6):
        table.insert(key, key * 10)
    return table
