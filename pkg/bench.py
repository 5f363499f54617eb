"""
ベンチマーク実行CLI

    python bench.py --experiment static --scale desk --seeds 0-9 --out results/static.csv
    python bench.py --storage-engine none --zipf 1.5 --out workload.wsc
    python bench.py --workload-file workload.wsc --storage-engine VIPHashing --out replay.csv
"""

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

import pandas as pd

from config.settings import EXPERIMENT_PRESETS, JOIN_SETTINGS, LOGGING_SETTINGS, SCALE_PRESETS, WORKLOAD_SETTINGS
from config.constants import EXPERIMENT_NAMES, STORAGE_ENGINE_MAPPING, KEY_PATTERN_CODES, KEY_ORDER_CODES
from config.help_texts import CLI_TEXTS, CLI_HELP
from utils.errors import ConfigError, WorkloadFormatError
from utils.experiments import expand_preset, run_experiment
from utils.join import JoinConfig, compare_join
from utils.report import (
    REPORT_FORMATS,
    audit_learn_triggers,
    emit_frame,
    emit_report,
    join_frame,
    relative_gain,
    summarize_engines,
    trials_to_frame,
    trigger_frame,
)
from utils.workload import WorkloadConfig
from utils.workload_io import write_workload

logger = logging.getLogger('bench')

# ワークロードオプション名 → WorkloadConfig のフィールド名
WORKLOAD_FLAGS = [item.name for item in fields(WorkloadConfig)]


def parse_seeds(text):
    """'0-9' または '0,3,7' をシードのリストに変換"""
    try:
        if '-' in text and ',' not in text:
            first, last = (int(part) for part in text.split('-', 1))
            if last < first:
                raise ValueError
            return list(range(first, last + 1))
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigError(f"--seeds の形式が不正です: {text}")


def build_parser():
    parser = argparse.ArgumentParser(prog='bench', description=CLI_TEXTS['description'], epilog=CLI_TEXTS['epilog'])

    workload = parser.add_argument_group('workload')
    workload.add_argument('--zipf', type=float, help=CLI_HELP['zipf'])
    workload.add_argument('--initial-size', type=int, help=CLI_HELP['initial_size'])
    workload.add_argument('--operation-count', type=int, help=CLI_HELP['operation_count'])
    workload.add_argument('--fetch-proportion', type=float, help=CLI_HELP['fetch_proportion'])
    workload.add_argument('--insert-proportion', type=float, help=CLI_HELP['insert_proportion'])
    workload.add_argument('--delete-proportion', type=float, help=CLI_HELP['delete_proportion'])
    workload.add_argument('--dist-shift-freq', type=int, help=CLI_HELP['dist_shift_freq'])
    workload.add_argument('--dist-shift-prct', type=float, help=CLI_HELP['dist_shift_prct'])
    workload.add_argument('--storage-engine', choices=list(STORAGE_ENGINE_MAPPING), help=CLI_HELP['storage_engine'])
    workload.add_argument('--key-pattern', choices=list(KEY_PATTERN_CODES), help=CLI_HELP['key_pattern'])
    workload.add_argument('--key-order', choices=list(KEY_ORDER_CODES), help=CLI_HELP['key_order'])
    workload.add_argument('--random-seed', type=int, help=CLI_HELP['random_seed'])

    harness = parser.add_argument_group('harness')
    harness.add_argument('--experiment', choices=EXPERIMENT_NAMES, default='static', help=CLI_HELP['experiment'])
    harness.add_argument('--seeds', help=CLI_HELP['seeds'])
    harness.add_argument('--scale', choices=list(SCALE_PRESETS), default='desk', help=CLI_HELP['scale'])
    harness.add_argument('--out', default='results/report.csv', help=CLI_HELP['out'])
    harness.add_argument('--format', choices=REPORT_FORMATS, default='csv', help=CLI_HELP['format'])
    harness.add_argument('--workload-file', help=CLI_HELP['workload_file'])
    harness.add_argument('--batch-size', type=int, help=CLI_HELP['batch_size'])
    harness.add_argument('--load-factor', type=float, help=CLI_HELP['load_factor'])
    harness.add_argument('--pk-cardinality', type=int, help=CLI_HELP['pk_cardinality'])
    harness.add_argument('--ratio', type=int, help=CLI_HELP['ratio'])
    harness.add_argument('-v', '--verbose', action='store_true', help=CLI_HELP['verbose'])
    return parser


def configure_logging(verbose=False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else LOGGING_SETTINGS['level'],
        format=LOGGING_SETTINGS['format'],
        datefmt=LOGGING_SETTINGS['datefmt'],
    )


def workload_overrides(args):
    """指定されたワークロードオプションだけを WorkloadConfig のフィールドとして取り出す"""
    return {name: getattr(args, name) for name in WORKLOAD_FLAGS if getattr(args, name, None) is not None}


def resolve_seeds(args):
    if args.seeds is not None:
        return parse_seeds(args.seeds)
    if args.random_seed is not None:
        return [args.random_seed]
    return None


def output_path(out, suffix, fmt):
    path = Path(out)
    stem = path.with_suffix('')
    return stem.parent / f"{stem.name}{suffix}.{fmt}"


def save_workload(args):
    """--storage-engine none: 生成したワークロードを保存する"""
    overrides = workload_overrides(args)
    settings = {name: WORKLOAD_SETTINGS[name] for name in WORKLOAD_FLAGS}
    settings.update(overrides)
    config = WorkloadConfig(**settings)
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_workload(config, path)
    return 0


def run_join(args, seeds):
    zipf_values = [args.zipf] if args.zipf is not None else EXPERIMENT_PRESETS['join']['zipf_values'][args.scale]
    frames = []
    summaries = []
    for zipf in zipf_values:
        config = JoinConfig(
            pk_cardinality=args.pk_cardinality or JOIN_SETTINGS['pk_cardinality'],
            ratio=args.ratio or JOIN_SETTINGS['ratio'],
            zipf=zipf,
            load_factor=args.load_factor or JOIN_SETTINGS['load_factor'],
        )
        comparison = compare_join(config, seeds)
        frames.append(join_frame(comparison))
        summaries.append({
            'zipf': zipf,
            'time_delta': comparison.summary['time_delta'],
            'displacement_delta': comparison.summary['displacement_delta'],
            'default_avg_displacement': comparison.summary['default']['median_avg_displacement'],
            'vip_avg_displacement': comparison.summary['vip']['median_avg_displacement'],
        })

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    emit_frame(pd.concat(frames, ignore_index=True), output_path(out, '', args.format), args.format)
    emit_frame(pd.DataFrame(summaries), output_path(out, '_summary', args.format), args.format)
    return 0


def run_point_queries(args, seeds):
    engines = None
    if args.storage_engine is not None:
        engines = [STORAGE_ENGINE_MAPPING[args.storage_engine]]

    specs = expand_preset(
        args.experiment,
        scale=args.scale,
        workload_overrides={k: v for k, v in workload_overrides(args).items() if k not in ('zipf', 'random_seed')},
        engines=engines,
        seeds=seeds,
        batch_size=args.batch_size,
        load_factors=[args.load_factor] if args.load_factor is not None else None,
        zipf_values=[args.zipf] if args.zipf is not None else None,
        workload_file=args.workload_file,
    )

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    all_trials = []
    summaries = []
    for spec in specs:
        trials = run_experiment(spec)
        suffix = f"_{spec.variant_label}" if len(specs) > 1 else ''
        emit_report(trials, output_path(out, suffix, args.format), args.format)

        summary = relative_gain(summarize_engines(trials_to_frame(trials)))
        summary.insert(1, 'zipf', spec.workload.zipf)
        summary.insert(2, 'load_factor', spec.load_factor)
        summaries.append(summary)

        triggers = trigger_frame(trials)
        if not triggers.empty:
            emit_frame(triggers, output_path(out, f"{suffix}_triggers", 'csv'), 'csv')
        all_trials.extend(trials)

    emit_frame(pd.concat(summaries, ignore_index=True), output_path(out, '_summary', args.format), args.format)

    ok, violations = audit_learn_triggers(all_trials)
    if not ok:
        logger.warning("learn triggers without a detected change: %d", len(violations))
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        seeds = resolve_seeds(args)
        if args.storage_engine == 'none':
            return save_workload(args)
        if args.experiment == 'join':
            return run_join(args, seeds)
        return run_point_queries(args, seeds)
    except ConfigError as e:
        parser.error(str(e))
    except (WorkloadFormatError, FileNotFoundError) as e:
        logger.error("ワークロードファイルを読み込めません: %s", e)
        return 1


if __name__ == '__main__':
    sys.exit(main())
