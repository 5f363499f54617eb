"""
8バイト整数キー用の MurmurHash3（x64_128 の 64bit 出力版）とバケット位置計算

入力長を8バイトに固定した MurmurHash3_x64_128 で、128bit 出力のうち h1 を返す。
バイト順は little-endian 固定のため、プラットフォームに依存せず同じ値になる。
"""

from config.constants import U64_MASK

_C1 = 0x87C37B91114253D5
_C2 = 0x4CF5AD432745937F


def _fmix64(k):
    k ^= k >> 33
    k = (k * 0xFF51AFD7ED558CCD) & U64_MASK
    k ^= k >> 33
    k = (k * 0xC4CEB9FE1A85EC53) & U64_MASK
    k ^= k >> 33
    return k


def hash_key(key, seed=0):
    """
    64bit キーのハッシュ値を計算

    Parameters:
    key: int - 符号なし64bitキー
    seed: int - 符号なし64bitシード

    Returns:
    int - 符号なし64bitハッシュ値
    """
    h1 = seed & U64_MASK
    h2 = h1

    # tail（常に8バイト、k2は0のまま）
    k1 = key & U64_MASK
    k1 = (k1 * _C1) & U64_MASK
    k1 = ((k1 << 31) | (k1 >> 33)) & U64_MASK
    k1 = (k1 * _C2) & U64_MASK
    h1 ^= k1

    # finalization
    h1 ^= 8
    h2 ^= 8
    h1 = (h1 + h2) & U64_MASK
    h2 = (h2 + h1) & U64_MASK
    h1 = _fmix64(h1)
    h2 = _fmix64(h2)
    h1 = (h1 + h2) & U64_MASK
    return h1


def bucket_index(h, bucket_count_log2):
    """ハッシュ値の下位 bucket_count_log2 ビットをバケット番号として返す"""
    return h & ((1 << bucket_count_log2) - 1)
