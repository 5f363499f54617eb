"""
ワークロードファイル（WSC1, little-endian）の書き出し・読み込み

magic 'WSC1' / version u32 / 設定ブロック / 事前投入 {count u64, (key u64, value u64)×count} /
操作 {opcode u8 (0=fetch, 1=insert, 2=delete), key u64, value u64（insert のみ）} をファイル末尾まで。
"""

import logging
import struct

from config.constants import WORKLOAD_FILE_CONSTANTS, KEY_PATTERN_CODES, KEY_ORDER_CODES
from utils.errors import BadMagic, CorruptWorkload
from utils.workload import OpKind, Operation, Workload, WorkloadConfig, generate

logger = logging.getLogger(__name__)

_HEADER = struct.Struct(WORKLOAD_FILE_CONSTANTS['header_format'])
_CONFIG = struct.Struct(WORKLOAD_FILE_CONSTANTS['config_format'])
_COUNT = struct.Struct(WORKLOAD_FILE_CONSTANTS['count_format'])
_PAIR = struct.Struct(WORKLOAD_FILE_CONSTANTS['pair_format'])
_OPCODE = struct.Struct(WORKLOAD_FILE_CONSTANTS['opcode_format'])
_KEY = struct.Struct(WORKLOAD_FILE_CONSTANTS['key_format'])

_PATTERN_NAMES = {code: name for name, code in KEY_PATTERN_CODES.items()}
_ORDER_NAMES = {code: name for name, code in KEY_ORDER_CODES.items()}


def _pack_config(config):
    return _CONFIG.pack(
        config.zipf, config.initial_size, config.operation_count,
        config.fetch_proportion, config.insert_proportion, config.delete_proportion,
        config.dist_shift_freq, config.dist_shift_prct,
        KEY_PATTERN_CODES[config.key_pattern], KEY_ORDER_CODES[config.key_order],
        config.random_seed
    )


def _unpack_config(raw):
    (zipf, initial_size, operation_count, fetch_p, insert_p, delete_p,
     shift_freq, shift_prct, pattern, order, seed) = _CONFIG.unpack(raw)
    if pattern not in _PATTERN_NAMES or order not in _ORDER_NAMES:
        raise CorruptWorkload(f"key_pattern / key_order の符号が不正です: {pattern}, {order}")
    return WorkloadConfig(
        zipf=zipf, initial_size=initial_size, operation_count=operation_count,
        fetch_proportion=fetch_p, insert_proportion=insert_p, delete_proportion=delete_p,
        dist_shift_freq=shift_freq, dist_shift_prct=shift_prct,
        key_pattern=_PATTERN_NAMES[pattern], key_order=_ORDER_NAMES[order], random_seed=seed
    )


def write_operations(stream, config, preload, operations):
    """開いたバイナリストリームへワークロードを書き出し、書いた操作数を返す"""
    stream.write(_HEADER.pack(WORKLOAD_FILE_CONSTANTS['magic'], WORKLOAD_FILE_CONSTANTS['version']))
    stream.write(_pack_config(config))
    stream.write(_COUNT.pack(len(preload)))
    for key, value in preload:
        stream.write(_PAIR.pack(key, value))

    written = 0
    for op in operations:
        if op.kind == OpKind.INSERT:
            stream.write(_OPCODE.pack(op.kind) + _PAIR.pack(op.key, op.value))
        else:
            stream.write(_OPCODE.pack(op.kind) + _KEY.pack(op.key))
        written += 1
    return written


def write_workload(config, path):
    """設定からワークロードを生成してファイルへ保存"""
    workload = generate(config)
    with open(path, 'wb') as stream:
        written = write_operations(stream, config, workload.preload, workload.operations)
    logger.info("workload written: %s (%d preload, %d operations)", path, len(workload.preload), written)
    return path


def _read_exact(stream, size, what):
    data = stream.read(size)
    if len(data) != size:
        raise CorruptWorkload(f"ファイルが途中で終わっています（{what}）")
    return data


def _iter_file_operations(path, offset):
    with open(path, 'rb') as stream:
        stream.seek(offset)
        index = 0
        while True:
            opcode_raw = stream.read(_OPCODE.size)
            if not opcode_raw:
                return
            (opcode,) = _OPCODE.unpack(opcode_raw)
            if opcode == OpKind.INSERT:
                key, value = _PAIR.unpack(_read_exact(stream, _PAIR.size, f"操作 {index}"))
                yield Operation(OpKind.INSERT, key, value)
            elif opcode in (OpKind.FETCH, OpKind.DELETE):
                (key,) = _KEY.unpack(_read_exact(stream, _KEY.size, f"操作 {index}"))
                yield Operation(OpKind(opcode), key)
            else:
                raise CorruptWorkload(f"不正なオペコードです: {opcode}（操作 {index}）")
            index += 1


def read_workload(path):
    """
    ワークロードファイルを読み込む

    ヘッダと事前投入部はすぐに読み、操作列は反復時にファイルから順に読む。

    Raises:
    BadMagic - マジックが WSC1 でない
    CorruptWorkload - 途中で切れている・不正な値を含む（操作列の場合は反復中に送出）
    """
    with open(path, 'rb') as stream:
        magic, version = _HEADER.unpack(_read_exact(stream, _HEADER.size, "ヘッダ"))
        if magic != WORKLOAD_FILE_CONSTANTS['magic']:
            raise BadMagic(f"マジックが不正です: {magic!r}")
        if version != WORKLOAD_FILE_CONSTANTS['version']:
            raise CorruptWorkload(f"未対応のバージョンです: {version}")
        config = _unpack_config(_read_exact(stream, _CONFIG.size, "設定ブロック"))
        (count,) = _COUNT.unpack(_read_exact(stream, _COUNT.size, "事前投入件数"))
        raw = _read_exact(stream, count * _PAIR.size, "事前投入データ")
        preload = list(_PAIR.iter_unpack(raw))
        offset = stream.tell()

    return Workload(config, preload, _iter_file_operations(path, offset))
