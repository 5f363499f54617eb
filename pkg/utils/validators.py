import math

from config.settings import TABLE_SETTINGS, WORKLOAD_SETTINGS
from config.constants import ENGINE_NAMES, EXPERIMENT_NAMES, KEY_PATTERN_CODES, KEY_ORDER_CODES


def validate_table_config(config):
    """ハッシュテーブル設定の検証"""
    errors = []

    if config.bucket_count_log2 < TABLE_SETTINGS['min_bucket_count_log2']:
        errors.append(f"bucket_count_log2 は {TABLE_SETTINGS['min_bucket_count_log2']} 以上が必要です: {config.bucket_count_log2}")
    if config.bucket_count_log2 > 40:
        errors.append(f"bucket_count_log2 が大きすぎます: {config.bucket_count_log2}")
    if not 0 < config.load_factor_min < config.load_factor_max:
        errors.append(f"負荷率の範囲が不正です: [{config.load_factor_min}, {config.load_factor_max}]")
    if not 0 <= config.hash_seed < 2 ** 64:
        errors.append(f"hash_seed は符号なし64bitが必要です: {config.hash_seed}")

    return len(errors) == 0, errors


def validate_controller_params(params):
    """VIPコントローラのパラメータ検証"""
    errors = []

    if params.learn_budget < 1:
        errors.append(f"N_L は1以上が必要です: {params.learn_budget}")
    if params.default_span != params.default_ratio * params.learn_budget:
        errors.append(f"N_D は {params.default_ratio} × N_L が必要です: N_D={params.default_span}, N_L={params.learn_budget}")
    if params.sense_span < 2:
        errors.append(f"N_S は2以上が必要です: {params.sense_span}")
    if not 0 < params.confidence < 1:
        errors.append(f"信頼水準 c は (0, 1) の範囲が必要です: {params.confidence}")
    if params.slowdown_factor < 1:
        errors.append(f"低速化係数 k は1以上が必要です: {params.slowdown_factor}")
    if params.max_sense_extensions < 0:
        errors.append(f"sense窓の延長上限は0以上が必要です: {params.max_sense_extensions}")

    return len(errors) == 0, errors


def validate_proportions(fetch, insert, delete, tolerance=None):
    """fetch/insert/delete 比率の検証（各比率が[0,1]、合計が1）"""
    if tolerance is None:
        tolerance = WORKLOAD_SETTINGS['proportion_tolerance']
    errors = []

    for name, value in (('fetch', fetch), ('insert', insert), ('delete', delete)):
        if not 0.0 <= value <= 1.0:
            errors.append(f"{name}_proportion は [0, 1] の範囲が必要です: {value}")

    total = fetch + insert + delete
    if abs(total - 1.0) > tolerance:
        errors.append(f"比率の合計が1ではありません: {total}")

    return len(errors) == 0, errors


def validate_workload_config(config):
    """ワークロード設定の検証"""
    errors = []

    if not (math.isfinite(config.zipf) and config.zipf >= 0):
        errors.append(f"zipf は0以上の有限値が必要です: {config.zipf}")
    if config.initial_size < 1:
        errors.append(f"initial_size は1以上が必要です: {config.initial_size}")
    if config.operation_count < 0:
        errors.append(f"operation_count は0以上が必要です: {config.operation_count}")

    _, proportion_errors = validate_proportions(
        config.fetch_proportion, config.insert_proportion, config.delete_proportion
    )
    errors.extend(proportion_errors)

    if config.dist_shift_freq < 0:
        errors.append(f"dist_shift_freq は0以上が必要です: {config.dist_shift_freq}")
    if not 0.0 <= config.dist_shift_prct <= 100.0:
        errors.append(f"dist_shift_prct は [0, 100] の範囲が必要です: {config.dist_shift_prct}")
    if config.key_pattern not in KEY_PATTERN_CODES:
        errors.append(f"key_pattern が不正です: {config.key_pattern}")
    if config.key_order not in KEY_ORDER_CODES:
        errors.append(f"key_order が不正です: {config.key_order}")
    if not 0 <= config.random_seed < 2 ** 64:
        errors.append(f"random_seed は符号なし64bitが必要です: {config.random_seed}")

    return len(errors) == 0, errors


def validate_join_config(config):
    """PK-FK 結合設定の検証"""
    errors = []

    if config.pk_cardinality < 1:
        errors.append(f"|R| は1以上が必要です: {config.pk_cardinality}")
    if config.ratio < 1:
        errors.append(f"|S|/|R| は1以上が必要です: {config.ratio}")
    if not (math.isfinite(config.zipf) and config.zipf >= 0):
        errors.append(f"zipf は0以上の有限値が必要です: {config.zipf}")
    if not 0.5 <= config.load_factor <= 1.5:
        errors.append(f"負荷率は [0.5, 1.5] の範囲が必要です: {config.load_factor}")

    return len(errors) == 0, errors


def validate_experiment_spec(spec):
    """実験定義の検証"""
    errors = []

    if spec.name not in EXPERIMENT_NAMES:
        errors.append(f"未知の実験名です: {spec.name}")
    unknown = [engine for engine in spec.engines if engine not in ENGINE_NAMES]
    if unknown:
        errors.append(f"未知のエンジンです: {unknown}")
    if not spec.engines:
        errors.append("エンジンが指定されていません")
    if not spec.seeds:
        errors.append("シードが指定されていません")
    if spec.batch_size < 1:
        errors.append(f"バッチサイズは1以上が必要です: {spec.batch_size}")
    if spec.scale not in ('desk', 'paper'):
        errors.append(f"scale は desk / paper のいずれかです: {spec.scale}")
    if not 0.5 <= spec.load_factor <= 1.5:
        errors.append(f"初期負荷率は [0.5, 1.5] の範囲が必要です: {spec.load_factor}")

    return len(errors) == 0, errors


def validate_required_columns(df, required_columns):
    """必須カラムの存在確認"""
    missing_columns = []

    for col in required_columns:
        if col not in df.columns:
            missing_columns.append(col)

    return len(missing_columns) == 0, missing_columns
