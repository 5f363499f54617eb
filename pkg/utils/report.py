"""
レポート出力・読み込みと集計（pandas）
"""

import io
import json
import logging
from pathlib import Path

import chardet
import numpy as np
import pandas as pd

from config.settings import REPORT_COLUMNS, JOIN_REPORT_COLUMNS
from config.constants import ENGINE_DEFAULT
from utils.controller import Mode
from utils.errors import ConfigError
from utils.sensing import has_distribution_changed
from utils.validators import validate_required_columns

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('csv', 'json')

TRIGGER_COLUMNS = [
    'experiment', 'engine', 'seed', 'op_index', 'from_mode', 'to_mode', 'sense_role',
    'baseline_u', 'baseline_w', 'current_u', 'current_w', 'changed'
]


def batch_row(experiment, engine, seed, batch):
    """BatchMetrics → REPORT_COLUMNS 順の行"""
    return {
        'experiment': experiment,
        'engine': engine,
        'seed': seed,
        'batch': batch.batch_index,
        'ops': batch.ops,
        'elapsed_ns': batch.elapsed_ns,
        'throughput_ops_s': batch.throughput_ops_s,
        'total_displacement': batch.total_displacement,
        'avg_displacement': batch.avg_displacement,
        'miss_count': batch.miss_count,
        'mode_learn_ops': batch.mode_ops[Mode.LEARN_ADAPT],
        'mode_sense_ops': batch.mode_ops[Mode.SENSE],
        'mode_default_ops': batch.mode_ops[Mode.DEFAULT],
        'learn_triggers': batch.learn_triggers,
        'sense_triggers': batch.sense_triggers,
    }


def _serialize_event(event):
    return [event.op_index, event.from_mode.value, event.to_mode.value]


def trials_to_records(trials):
    """JSON 用の行（REPORT_COLUMNS に warmup と trigger_events を加える）"""
    records = []
    for trial in trials:
        for batch in trial.batches:
            row = batch_row(trial.experiment, trial.engine, trial.seed, batch)
            row['warmup'] = batch.warmup
            row['trigger_events'] = [_serialize_event(event) for event in batch.trigger_events]
            records.append(row)
    return records


def trials_to_frame(trials):
    rows = [
        batch_row(trial.experiment, trial.engine, trial.seed, batch)
        for trial in trials
        for batch in trial.batches
    ]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def emit_report(trials, path, fmt='csv'):
    """
    バッチ計測値をファイルに出力（列順は REPORT_COLUMNS で固定）

    Parameters:
    trials: list[TrialResult] - 空でもよい（CSV はヘッダのみ）
    path: str | Path - 出力先
    fmt: str - 'csv' または 'json'
    """
    if fmt not in REPORT_FORMATS:
        raise ConfigError(f"未知の出力形式です: {fmt}")

    path = Path(path)
    if fmt == 'csv':
        trials_to_frame(trials).to_csv(path, index=False)
    else:
        with open(path, 'w', encoding='utf-8') as stream:
            json.dump({'columns': REPORT_COLUMNS, 'rows': trials_to_records(trials)}, stream, ensure_ascii=False)
    logger.info("report written: %s", path)
    return path


def _frame_from_json(payload):
    rows = payload['rows'] if isinstance(payload, dict) else payload
    df = pd.DataFrame.from_records(rows)
    if df.empty:
        return pd.DataFrame(columns=REPORT_COLUMNS)
    return df


def decode_report(raw, filename):
    """
    アップロードされたバイト列からレポートを読み込む（文字コードは chardet で判別）

    Returns:
    tuple - (DataFrame, 判別した文字コード)
    """
    detected = chardet.detect(raw)
    encoding = detected.get('encoding') or 'utf-8'
    if encoding.lower() == 'ascii':
        encoding = 'utf-8'
    text = raw.decode(encoding, errors='replace')

    if filename.lower().endswith('.json'):
        return _frame_from_json(json.loads(text)), encoding
    return pd.read_csv(io.StringIO(text), float_precision='round_trip'), encoding


def check_report_columns(df):
    """REPORT_COLUMNS が揃っているか（(ok, 不足列) を返す）"""
    return validate_required_columns(df, REPORT_COLUMNS)


def _per_seed(df):
    """(experiment, engine, seed) ごとの集計"""
    df = df.copy()
    # 成功 fetch 件数 = total / avg（avg=0 のバッチは成功 fetch なし）
    avg = df['avg_displacement']
    df['_hits'] = (df['total_displacement'] / avg.where(avg > 0)).fillna(0.0)
    grouped = df.groupby(['experiment', 'engine', 'seed'], sort=True).agg(
        ops=('ops', 'sum'),
        elapsed_ns=('elapsed_ns', 'sum'),
        total_displacement=('total_displacement', 'sum'),
        hits=('_hits', 'sum'),
        miss_count=('miss_count', 'sum'),
        mode_learn_ops=('mode_learn_ops', 'sum'),
        mode_sense_ops=('mode_sense_ops', 'sum'),
        mode_default_ops=('mode_default_ops', 'sum'),
        learn_triggers=('learn_triggers', 'sum'),
        sense_triggers=('sense_triggers', 'sum'),
        batches=('batch', 'count'),
    ).reset_index()
    grouped['throughput_ops_s'] = grouped['ops'] / (grouped['elapsed_ns'].clip(lower=1) / 1e9)
    grouped['avg_displacement'] = (grouped['total_displacement'] / grouped['hits'].where(grouped['hits'] > 0)).fillna(0.0)
    return grouped


def summarize_engines(df):
    """
    (experiment, engine) ごとにシード間の中央値を求める

    Returns:
    DataFrame - median_throughput_ops_s, median_avg_displacement, median_total_displacement,
                learn_share, sense_share, default_share, median_learn_triggers, seeds
    """
    if df.empty:
        return pd.DataFrame(columns=[
            'experiment', 'engine', 'seeds', 'median_throughput_ops_s', 'median_avg_displacement',
            'median_total_displacement', 'learn_share', 'sense_share', 'default_share', 'median_learn_triggers'
        ])

    per_seed = _per_seed(df)
    for column, source in (('learn_share', 'mode_learn_ops'), ('sense_share', 'mode_sense_ops'), ('default_share', 'mode_default_ops')):
        per_seed[column] = per_seed[source] / per_seed['ops'].clip(lower=1)

    summary = per_seed.groupby(['experiment', 'engine'], sort=True).agg(
        seeds=('seed', 'nunique'),
        median_throughput_ops_s=('throughput_ops_s', 'median'),
        median_avg_displacement=('avg_displacement', 'median'),
        median_total_displacement=('total_displacement', 'median'),
        learn_share=('learn_share', 'median'),
        sense_share=('sense_share', 'median'),
        default_share=('default_share', 'median'),
        median_learn_triggers=('learn_triggers', 'median'),
    ).reset_index()
    return summary


def relative_gain(summary, metric='median_throughput_ops_s', baseline=ENGINE_DEFAULT):
    """各エンジンの指標の baseline エンジンに対する相対差（(x - base) / base）"""
    result = summary.copy()
    base = summary[summary['engine'] == baseline].set_index('experiment')[metric]
    base_values = result['experiment'].map(base)
    result[f'{metric}_gain'] = (result[metric] - base_values) / base_values
    return result


def batch_series(df, experiment, seed):
    """1つの (実験, シード) のバッチ列をエンジン・バッチ順に並べる"""
    rows = df[(df['experiment'] == experiment) & (df['seed'] == seed)]
    return rows.sort_values(['engine', 'batch']).reset_index(drop=True)


def trigger_batches(df):
    """learn / sense の遷移が起きたバッチ"""
    return df[(df['learn_triggers'] > 0) | (df['sense_triggers'] > 0)].copy()


def trigger_frame(trials):
    """
    遷移イベントの一覧（sense 結果の γ_B / γ_C を含む）

    changed は compare 窓の比較結果。learn への遷移では必ず True になる。
    """
    rows = []
    for trial in trials:
        for event in trial.events:
            changed = None
            if event.baseline is not None and event.current is not None:
                changed = has_distribution_changed(event.baseline, event.current)
            rows.append({
                'experiment': trial.experiment,
                'engine': trial.engine,
                'seed': trial.seed,
                'op_index': event.op_index,
                'from_mode': event.from_mode.value,
                'to_mode': event.to_mode.value,
                'sense_role': event.sense_role.value if event.sense_role is not None else None,
                'baseline_u': event.baseline.u if event.baseline is not None else None,
                'baseline_w': event.baseline.w if event.baseline is not None else None,
                'current_u': event.current.u if event.current is not None else None,
                'current_w': event.current.w if event.current is not None else None,
                'changed': changed,
            })
    return pd.DataFrame(rows, columns=TRIGGER_COLUMNS)


def audit_learn_triggers(trials):
    """
    sense 後の learn 遷移がすべて分布変化の条件を満たすか検査

    Returns:
    tuple - (全て満たすか, 条件を満たさない遷移の DataFrame)
    """
    frame = trigger_frame(trials)
    relearn = frame[(frame['from_mode'] == Mode.SENSE.value) & (frame['to_mode'] == Mode.LEARN_ADAPT.value)]
    violations = relearn[~relearn['changed'].fillna(False).astype(bool)]
    return violations.empty, violations


def join_frame(comparison, experiment='join'):
    rows = [{
        'experiment': experiment,
        'engine': report.engine,
        'seed': report.seed,
        'zipf': report.zipf,
        'pk_cardinality': report.pk_cardinality,
        's_cardinality': report.fk_cardinality,
        'build_ns': report.build_ns,
        'probe_ns': report.probe_ns,
        'learn_ns': report.learn_ns,
        'output_cardinality': report.output_cardinality,
        'total_displacement': report.total_displacement,
        'avg_displacement': report.avg_displacement,
        'learn_budget': report.learn_budget,
    } for report in comparison.reports]
    return pd.DataFrame(rows, columns=JOIN_REPORT_COLUMNS)


def emit_frame(df, path, fmt='csv'):
    """集計結果などの DataFrame をそのまま出力"""
    if fmt not in REPORT_FORMATS:
        raise ConfigError(f"未知の出力形式です: {fmt}")
    path = Path(path)
    if fmt == 'csv':
        df.to_csv(path, index=False)
    else:
        with open(path, 'w', encoding='utf-8') as stream:
            json.dump({'columns': list(df.columns), 'rows': df.to_dict(orient='records')}, stream, ensure_ascii=False, default=_json_default)
    logger.info("report written: %s", path)
    return path


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"JSONに変換できません: {type(value)}")
