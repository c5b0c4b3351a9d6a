import csv
import json

import numpy as np
import pytest

from runs.emitters import RunEmitter, format_cell, format_mode
from runs.serializers import load_config
from shared.types import TraceEntry


@pytest.fixture
def config(output_dir, small_config):
    return load_config(overrides={**small_config, "output_dir": str(output_dir)})


class TestFormatting:
    """Test CSV cell formatting"""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (None, ""),
            (True, "true"),
            (np.bool_(False), "false"),
            (np.int64(3), "3"),
            (0.1, "0.1"),
            (np.float64(1.0) / 3.0, repr(1.0 / 3.0)),
            ("mountain_pass", "mountain_pass"),
        ],
    )
    def test_format_cell(self, value, expected):
        """Test each cell type"""
        assert format_cell(value) == expected

    def test_format_mode(self):
        """Test space-joined lattice modes"""
        assert format_mode((1, 0, -1)) == "1 0 -1"


class TestRunEmitter:
    """Test file naming and contents"""

    def test_names(self, config, output_dir):
        """Test <command>-<hash12>[-suffix].<ext>"""
        emitter = RunEmitter("eigen", config)
        assert emitter.path("csv") == output_dir / f"eigen-{config.short_hash}.csv"
        assert emitter.path("csv", "trace").name == f"eigen-{config.short_hash}-trace.csv"

    def test_table_rows(self, config):
        """Test sequence and dict rows in header order"""
        emitter = RunEmitter("eigen", config)
        path = emitter.write_table(("a", "b"), [(1, 0.5), {"b": None, "a": 2}])
        assert path.read_text() == "a,b\n1,0.5\n2,\n"
        assert emitter.files == [path]

    def test_trace(self, config):
        """Test the trace header and columns"""
        emitter = RunEmitter("solve", config)
        path = emitter.write_trace([TraceEntry(1, -2.0, 1e-3, 4.0, 0.5, restart=2)])
        rows = list(csv.DictReader(path.open()))
        assert rows == [
            {
                "restart": "2",
                "iteration": "1",
                "value": "-2.0",
                "residual": "0.001",
                "norm": "4.0",
                "step": "0.5",
            }
        ]

    def test_manifest(self, config):
        """Test that the manifest lists every file and reloads as a config"""
        emitter = RunEmitter("spectrum", config)
        table = emitter.write_table(("a",), [(1,)])
        manifest = emitter.write_manifest(count=1)
        document = json.loads(manifest.read_text())
        assert document["files"] == [table.name, manifest.name]
        assert document["config_hash"] == config.config_hash
        assert document["count"] == 1
        assert document["model"]["m"] == 3
        assert load_config(manifest).config_hash == config.config_hash

    def test_field_dump(self, config, field_factory):
        """Test binary field files"""
        emitter = RunEmitter("solve", config)
        path = emitter.write_field(field_factory(1), 2)
        assert path.name == f"solve-{config.short_hash}-field2.bin"
        assert path.stat().st_size > 0
