import pandas as pd
import pytest

import bench
from config.settings import REPORT_COLUMNS
from utils.errors import ConfigError
from utils.workload_io import read_workload


class TestParseSeeds:

    @pytest.mark.parametrize("text, expected", [
        ("0-9", list(range(10))),
        ("0,3,7", [0, 3, 7]),
        ("5", [5]),
        ("4-4", [4]),
    ])
    def test_valid(self, text, expected):
        assert bench.parse_seeds(text) == expected

    @pytest.mark.parametrize("text", ["a-b", "9-0", "1,x"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            bench.parse_seeds(text)


class TestOutputPath:

    def test_suffix(self, tmp_path):
        assert bench.output_path(tmp_path / 'static.csv', '_summary', 'csv') == tmp_path / 'static_summary.csv'

    def test_format_replaces_extension(self, tmp_path):
        assert bench.output_path(tmp_path / 'static.csv', '', 'json') == tmp_path / 'static.json'


class TestMain:

    def test_static_run_writes_reports(self, tmp_path):
        out = tmp_path / 'static.csv'
        code = bench.main([
            '--experiment', 'static', '--zipf', '1.0', '--initial-size', '200',
            '--operation-count', '500', '--seeds', '0-1', '--batch-size', '250', '--out', str(out)
        ])

        assert code == 0
        report = pd.read_csv(out)
        assert list(report.columns) == REPORT_COLUMNS
        assert len(report) == 2 * 2 * 2
        assert (tmp_path / 'static_summary.csv').exists()
        assert (tmp_path / 'static_triggers.csv').exists()

    def test_storage_engine_selects_single_engine(self, tmp_path):
        out = tmp_path / 'vip.csv'
        bench.main([
            '--storage-engine', 'VIPHashing', '--zipf', '1.5', '--initial-size', '100',
            '--operation-count', '200', '--random-seed', '3', '--batch-size', '100', '--out', str(out)
        ])
        report = pd.read_csv(out)
        assert set(report['engine']) == {'vip'}
        assert set(report['seed']) == {3}

    def test_save_then_replay_workload(self, tmp_path):
        workload = tmp_path / 'w.wsc'
        assert bench.main([
            '--storage-engine', 'none', '--initial-size', '50', '--operation-count', '120',
            '--zipf', '1.2', '--random-seed', '8', '--out', str(workload)
        ]) == 0
        config = read_workload(workload).config
        assert (config.initial_size, config.operation_count, config.zipf, config.random_seed) == (50, 120, 1.2, 8)

        out = tmp_path / 'replay.csv'
        assert bench.main([
            '--workload-file', str(workload), '--storage-engine', 'ChainedHashing',
            '--batch-size', '60', '--out', str(out)
        ]) == 0
        report = pd.read_csv(out)
        assert list(report['ops']) == [60, 60]
        assert set(report['seed']) == {8}

    def test_join_run(self, tmp_path):
        out = tmp_path / 'join.csv'
        assert bench.main([
            '--experiment', 'join', '--zipf', '2.0', '--pk-cardinality', '100', '--ratio', '4',
            '--seeds', '0', '--out', str(out)
        ]) == 0
        frame = pd.read_csv(out)
        assert list(frame['engine']) == ['default', 'vip']
        assert (tmp_path / 'join_summary.csv').exists()

    def test_bad_seeds_exit_code(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            bench.main(['--seeds', 'x-y', '--out', str(tmp_path / 'r.csv')])
        assert excinfo.value.code == 2

    def test_invalid_proportions_exit_code(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            bench.main(['--fetch-proportion', '0.5', '--out', str(tmp_path / 'r.csv')])
        assert excinfo.value.code == 2

    def test_missing_workload_file(self, tmp_path):
        code = bench.main(['--workload-file', str(tmp_path / 'missing.wsc'), '--out', str(tmp_path / 'r.csv')])
        assert code == 1

    def test_corrupt_workload_file(self, tmp_path):
        path = tmp_path / 'bad.wsc'
        path.write_bytes(b'NOPE' + bytes(100))
        code = bench.main(['--workload-file', str(path), '--out', str(tmp_path / 'r.csv')])
        assert code == 1
