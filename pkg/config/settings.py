# アプリケーション設定ファイル

# ハッシュテーブル設定
TABLE_SETTINGS = {
    'load_factor_min': 0.5,   # これを下回ると縮小（最小サイズ制約あり）
    'load_factor_max': 1.5,   # これを超えると拡張
    'min_bucket_count_log2': 1,  # 最小2バケット
    'default_bucket_count_log2': 1,
    'hash_seed': 0
}

# VIPコントローラ設定（learn+adapt / sense / default の3モード）
CONTROLLER_SETTINGS = {
    'learn_factor': 1.5,       # N_L = ceil(1.5 × バケット数)
    'default_ratio': 60,       # N_D = 60 × N_L
    'sense_span': 1000,        # N_S
    'confidence': 0.95,        # 信頼水準 c
    'slowdown_factor': 4,      # learn+adaptモードの最悪時低速化係数 k（文書化用）
    'max_sense_extensions': 10  # 全ミス時のsense窓延長上限
}

# ワークロード生成設定（CLI オプション名に対応）
WORKLOAD_SETTINGS = {
    'zipf': 1.0,
    'initial_size': 1_000_000,
    'operation_count': 100_000_000,
    'fetch_proportion': 1.0,
    'insert_proportion': 0.0,
    'delete_proportion': 0.0,
    'dist_shift_freq': 0,      # 0 = 分布シフトなし
    'dist_shift_prct': 0.0,
    'key_pattern': 'random',
    'key_order': 'random',
    'random_seed': 0,
    'proportion_tolerance': 1e-9
}

# PK-FK ハッシュ結合設定
JOIN_SETTINGS = {
    'pk_cardinality': 91_750,  # 1.4 × 2^16（負荷率1.4を2のべき乗バケットで実現）
    'ratio': 16,
    'zipf': 2.0,
    'load_factor': 1.4,
    'random_seed': 0,
    'learn_divisor': 61,       # N_L = min(|R|, floor(|S| / 61))
    'seed_count': 10
}

# バッチ計測設定
BATCH_SETTINGS = {
    'batch_size': 1_000_000,
    'flag_warmup_batch': True
}

# 実行スケール（desk: 手元環境、paper: 大規模）
SCALE_PRESETS = {
    'desk': {
        'bucket_count_log2': 20,
        'initial_size': 1_000_000,
        'operation_count': 100_000_000,
        'churn_freq': 10_000_000,
        'seeds': list(range(10))
    },
    'paper': {
        'bucket_count_log2': 24,
        'initial_size': 10_000_000,
        'operation_count': 1_000_000_000,
        'churn_freq': 100_000_000,
        'seeds': list(range(10))
    }
}

# 実験プリセット
# load_factor は固定バケット数（2^bucket_count_log2）に対する初期負荷率
EXPERIMENT_PRESETS = {
    'roofline': {
        'engines': ['default', 'vip-preconfigured'],
        'zipf_values': {'desk': [0.0, 1.0, 1.5, 2.0], 'paper': [x / 2 for x in range(11)]},
        'load_factors': [0.6],
        'fetch_proportion': 1.0,
        'key_order': 'random'
    },
    'roofline-lf': {
        'engines': ['default', 'vip-preconfigured'],
        'zipf_values': {'desk': [2.0], 'paper': [2.0]},
        'load_factors': [0.5, 0.75, 1.0, 1.25, 1.5],
        'fetch_proportion': 1.0,
        'key_order': 'random'
    },
    'counter-overhead': {
        'engines': ['default', 'counter17'],
        'zipf_values': {'desk': [0.0], 'paper': [0.0]},
        'load_factors': [0.95],
        'fetch_proportion': 1.0,
        'key_order': 'random'
    },
    'static': {
        'engines': ['default', 'vip'],
        'zipf_values': {'desk': [0.0, 1.0, 1.5, 2.0], 'paper': [0.0, 1.0, 1.5, 2.0]},
        'load_factors': [0.95],
        'fetch_proportion': 1.0,
        'key_order': 'random'
    },
    'medium-churn': {
        'engines': ['default', 'vip'],
        'zipf_values': {'desk': [1.0, 1.5], 'paper': [1.0, 1.5]},
        'load_factors': [0.95],
        'fetch_proportion': 1.0,
        'dist_shift_prct': 25.0,
        'churn_cadence': 'medium',
        'key_order': 'random'
    },
    'high-churn': {
        'engines': ['default', 'vip'],
        'zipf_values': {'desk': [1.0, 1.5], 'paper': [1.0, 1.5]},
        'load_factors': [0.95],
        'fetch_proportion': 1.0,
        'dist_shift_prct': 50.0,
        'churn_cadence': 'high',
        'key_order': 'random'
    },
    'steady-state': {
        'engines': ['default', 'vip'],
        'zipf_values': {'desk': [1.0, 1.5], 'paper': [1.0, 1.5]},
        'load_factors': [0.95],
        'fetch_proportion': 0.98,
        'insert_proportion': 0.01,
        'delete_proportion': 0.01,
        'key_order': 'random'
    },
    'read-mostly': {
        'engines': ['default', 'vip'],
        'zipf_values': {'desk': [1.0, 1.5], 'paper': [1.0, 1.5]},
        'load_factors': [0.95],
        'fetch_proportion': 0.98,
        'insert_proportion': 0.02,
        'delete_proportion': 0.0,
        'key_order': 'random'
    },
    'join': {
        'engines': ['default', 'vip'],
        'zipf_values': {'desk': [0.0, 1.0, 2.0, 3.0], 'paper': [0.0, 1.0, 2.0, 3.0]},
        'load_factors': [1.4]
    }
}

# 分布シフト周期（desk は paper の1/10）
CHURN_CADENCE = {
    'medium': {'desk': 10_000_000, 'paper': 100_000_000},
    'high': {'desk': 1_000_000, 'paper': 10_000_000}
}

# レポートCSVの列（順序固定）
REPORT_COLUMNS = [
    'experiment', 'engine', 'seed', 'batch', 'ops', 'elapsed_ns',
    'throughput_ops_s', 'total_displacement', 'avg_displacement', 'miss_count',
    'mode_learn_ops', 'mode_sense_ops', 'mode_default_ops',
    'learn_triggers', 'sense_triggers'
]

# 結合実験レポートの列
JOIN_REPORT_COLUMNS = [
    'experiment', 'engine', 'seed', 'zipf', 'pk_cardinality', 's_cardinality',
    'build_ns', 'probe_ns', 'learn_ns', 'output_cardinality',
    'total_displacement', 'avg_displacement', 'learn_budget'
]

# ログ設定
LOGGING_SETTINGS = {
    'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
    'datefmt': '%Y-%m-%d %H:%M:%S',
    'level': 'INFO'
}

# 表示設定
DISPLAY_SETTINGS = {
    'max_preview_rows': 10,
    'default_chart_height': 500
}

# アプリケーション情報
APP_INFO = {
    'title': 'VIPハッシュ ベンチマークレポート',
    'version': '1.0.0',
    'icon': '📊'
}
