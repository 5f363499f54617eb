"""
再現可能なワークロード用の決定的乱数生成器

アルゴリズムは固定: 状態は SplitMix64 で randomSeed から初期化した xoshiro256**。
同じシードからは、どの環境でも同じ64bit列が得られる。
"""

from config.constants import U64_MASK

_DOUBLE_SCALE = 1.0 / (1 << 53)


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & U64_MASK


def splitmix64(state):
    """SplitMix64 の1ステップ（新しい状態, 出力）を返す"""
    state = (state + 0x9E3779B97F4A7C15) & U64_MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & U64_MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & U64_MASK
    return state, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** 生成器"""

    def __init__(self, seed=0):
        self.seed = seed & U64_MASK
        state = self.seed
        words = []
        for _ in range(4):
            state, word = splitmix64(state)
            words.append(word)
        self._s = words

    def next_u64(self):
        s = self._s
        result = (_rotl((s[1] * 5) & U64_MASK, 7) * 9) & U64_MASK
        t = (s[1] << 17) & U64_MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def random(self):
        """[0, 1) の一様乱数（上位53bit）"""
        return (self.next_u64() >> 11) * _DOUBLE_SCALE

    def randbelow(self, n):
        """[0, n) の一様整数（棄却法で偏りなし）"""
        if n <= 0:
            raise ValueError(f"n は1以上が必要です: {n}")
        if n == 1:
            return 0
        bits = (n - 1).bit_length()
        while True:
            value = self.next_u64() >> (64 - bits)
            if value < n:
                return value

    def shuffle(self, items):
        """Fisher-Yates によるその場シャッフル"""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]
