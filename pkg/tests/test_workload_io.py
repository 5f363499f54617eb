import pytest

from config.constants import WORKLOAD_FILE_CONSTANTS
from utils.errors import BadMagic, CorruptWorkload
from utils.workload import OpKind, WorkloadConfig, generate
from utils.workload_io import read_workload, write_workload


@pytest.fixture
def mixed_config():
    return WorkloadConfig(
        zipf=1.2, initial_size=100, operation_count=500,
        fetch_proportion=0.7, insert_proportion=0.2, delete_proportion=0.1,
        dist_shift_freq=100, dist_shift_prct=25.0,
        key_pattern='random', key_order='sorted', random_seed=17
    )


@pytest.fixture
def workload_file(tmp_path, mixed_config):
    return write_workload(mixed_config, tmp_path / 'mixed.wsc')


class TestRoundTrip:

    def test_same_as_generated(self, workload_file, mixed_config):
        expected = generate(mixed_config)
        loaded = read_workload(workload_file)

        assert loaded.config == mixed_config
        assert loaded.preload == expected.preload
        assert list(loaded.operations) == list(expected.operations)
        assert loaded.model is None

    def test_operations_stream_lazily(self, workload_file):
        ops = read_workload(workload_file).operations
        first = next(ops)
        assert first.kind in tuple(OpKind)

    def test_starts_with_magic(self, workload_file):
        assert workload_file.read_bytes()[:4] == b'WSC1'

    def test_empty_operation_list(self, tmp_path):
        config = WorkloadConfig(initial_size=3, operation_count=0, key_pattern='sequential')
        loaded = read_workload(write_workload(config, tmp_path / 'empty.wsc'))
        assert [key for key, _ in loaded.preload] == [1, 2, 3]
        assert list(loaded.operations) == []


class TestCorruptFiles:

    def test_bad_magic(self, tmp_path, workload_file):
        path = tmp_path / 'bad.wsc'
        path.write_bytes(b'XXXX' + workload_file.read_bytes()[4:])
        with pytest.raises(BadMagic):
            read_workload(path)

    def test_unknown_version(self, tmp_path, workload_file):
        data = bytearray(workload_file.read_bytes())
        data[4] = 99
        path = tmp_path / 'version.wsc'
        path.write_bytes(bytes(data))
        with pytest.raises(CorruptWorkload):
            read_workload(path)

    def test_truncated_header(self, tmp_path, workload_file):
        path = tmp_path / 'short.wsc'
        path.write_bytes(workload_file.read_bytes()[:20])
        with pytest.raises(CorruptWorkload):
            read_workload(path)

    def test_truncated_operation(self, tmp_path, workload_file):
        path = tmp_path / 'cut.wsc'
        path.write_bytes(workload_file.read_bytes()[:-3])
        ops = read_workload(path).operations
        with pytest.raises(CorruptWorkload):
            list(ops)

    def test_bad_opcode(self, tmp_path, workload_file):
        path = tmp_path / 'opcode.wsc'
        path.write_bytes(workload_file.read_bytes() + bytes([7]) + bytes(8))
        with pytest.raises(CorruptWorkload):
            list(read_workload(path).operations)

    def test_bad_key_pattern_code(self, tmp_path, workload_file):
        data = bytearray(workload_file.read_bytes())
        header = 4 + 4
        pattern_offset = header + 8 + 8 + 8 + 8 * 3 + 8 + 8
        data[pattern_offset] = 9
        path = tmp_path / 'pattern.wsc'
        path.write_bytes(bytes(data))
        with pytest.raises(CorruptWorkload):
            read_workload(path)

    def test_magic_constant(self):
        assert WORKLOAD_FILE_CONSTANTS['magic'] == b'WSC1'
