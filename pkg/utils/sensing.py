"""
sense モードと分布変化の検出

N_S 回の fetch で displacement の平均 u と、ガウス裾確率の上界から求めた
信頼区間の半幅 w を推定する。2つの区間が離れていれば分布が変化したと判定する。
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from config.settings import CONTROLLER_SETTINGS
from utils.errors import InsufficientSamples

# 累積値は符号なし64bitに収まる前提（N_S × 最大チェイン長^2）
_U64_LIMIT = 2 ** 64


class SenseStats(NamedTuple):
    """sense 窓の要約 γ = (u, w)"""
    u: float
    w: float


@dataclass
class SenseAccumulator:
    cumulative_disp: int = 0
    cumulative_disp_sq: int = 0
    count: int = 0
    confidence: float = CONTROLLER_SETTINGS['confidence']

    def record_fetch(self, displacement):
        """成功した fetch の displacement を加算（ミスは呼び出し側で除外する）"""
        self.count += 1
        self.cumulative_disp += displacement
        self.cumulative_disp_sq += displacement * displacement
        assert self.cumulative_disp_sq < _U64_LIMIT, "disp_sq が64bitを超えました"

    def finalize(self):
        return finalize(self)


def finalize(acc):
    """
    平均・分散・信頼区間半幅を計算

    v = disp_sq/(n-1) - disp^2/(n(n-1)) を整数のまま通分してから1回だけ除算し、
    丸めで負になった場合は0に切り上げる。w には自然対数を使う。

    Parameters:
    acc: SenseAccumulator - 累積値

    Returns:
    SenseStats - (u, w)
    """
    v = sample_variance(acc)
    n = acc.count
    u = acc.cumulative_disp / n
    w = math.sqrt(-2.0 * v * math.log(1.0 - acc.confidence) / n)
    return SenseStats(u, w)


def sample_variance(acc):
    """整数累積値からの不偏標本分散（丸めで負になれば0）"""
    n = acc.count
    if n < 2:
        raise InsufficientSamples(n)
    v = (n * acc.cumulative_disp_sq - acc.cumulative_disp * acc.cumulative_disp) / (n * (n - 1))
    return max(v, 0.0)


def has_distribution_changed(baseline, current):
    """2つの信頼区間が交わらなければ True（|u_B - u_C| > w_B + w_C）"""
    return abs(baseline.u - current.u) > baseline.w + current.w
