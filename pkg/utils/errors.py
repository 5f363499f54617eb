# 例外定義


class VipHashError(Exception):
    """本パッケージの例外の基底クラス"""


class ConfigError(VipHashError, ValueError):
    """設定値が不正"""


class InsufficientSamples(VipHashError):
    """sense窓の成功fetchが2件未満で分散を推定できない"""

    def __init__(self, count):
        super().__init__(f"成功fetchが不足しています: {count}件（2件以上必要）")
        self.count = count


class WorkloadFormatError(VipHashError):
    """ワークロードファイルの形式エラー"""


class CorruptWorkload(WorkloadFormatError):
    """ワークロードファイルが途中で切れている、または不正なオペコードを含む"""


class BadMagic(WorkloadFormatError):
    """ワークロードファイルのマジックが WSC1 ではない"""


class JoinIntegrity(VipHashError):
    """PK-FK 結合で probe キーが見つからない（外部キー制約違反）"""

    def __init__(self, key, probe_index):
        super().__init__(f"外部キー制約違反: probe {probe_index} のキー {key} がRに存在しません")
        self.key = key
        self.probe_index = probe_index
