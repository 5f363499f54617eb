# 共通定数設定ファイル

# エンジン種別
ENGINE_DEFAULT = 'default'
ENGINE_VIP = 'vip'
ENGINE_VIP_PRECONFIGURED = 'vip-preconfigured'
ENGINE_COUNTER17 = 'counter17'

ENGINE_NAMES = [ENGINE_DEFAULT, ENGINE_VIP, ENGINE_VIP_PRECONFIGURED, ENGINE_COUNTER17]

# --storage-engine とエンジン種別の対応
STORAGE_ENGINE_MAPPING = {
    'ChainedHashing': ENGINE_DEFAULT,
    'VIPHashing': ENGINE_VIP,
    'none': None  # ワークロードをディスクに保存するのみ
}

# エンジンの表示名
ENGINE_DISPLAY_NAMES = {
    ENGINE_DEFAULT: 'Default',
    ENGINE_VIP: 'VIP（オンライン学習）',
    ENGINE_VIP_PRECONFIGURED: 'VIP（事前配置）',
    ENGINE_COUNTER17: '17バイトエントリ'
}

# 統一カラーパレット
UNIFIED_COLOR_PALETTE = {
    ENGINE_DEFAULT: '#4ECDC4',
    ENGINE_VIP: '#FF6B6B',
    ENGINE_VIP_PRECONFIGURED: '#45B7D1',
    ENGINE_COUNTER17: '#FFCC99',
    # モード・トリガー用
    'learn': '#FF9999',
    'sense': '#66B2FF',
    'default_mode': '#99FF99'
}

# 実験名
EXPERIMENT_NAMES = [
    'roofline', 'roofline-lf', 'counter-overhead', 'static', 'medium-churn',
    'high-churn', 'steady-state', 'read-mostly', 'join'
]

# 2^64 マスク
U64_MASK = 0xFFFF_FFFF_FFFF_FFFF

# 空きリンク（arena上の番兵）
NIL = -1

# 17バイトエントリの1バイトカウンタ上限
COUNTER17_MAX = 0xFF

# ワークロードファイル（WSC1）関連の定数
WORKLOAD_FILE_CONSTANTS = {
    'magic': b'WSC1',
    'version': 1,
    'header_format': '<4sI',
    'config_format': '<dQQdddQdBBQ',
    'count_format': '<Q',
    'pair_format': '<QQ',
    'opcode_format': '<B',
    'key_format': '<Q'
}

# key_pattern / key_order の符号化
KEY_PATTERN_CODES = {'random': 0, 'sequential': 1}
KEY_ORDER_CODES = {'random': 0, 'sorted': 1}
