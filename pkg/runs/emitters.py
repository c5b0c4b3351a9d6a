"""
Result files of a run. Every file is named ``<command>-<hash12>[-suffix].<ext>``
after the config that produced it, floats are written in their shortest
round-trip form and nothing time-dependent is emitted, so equal configs
give byte-identical outputs.
"""

import csv
import json
import logging
from pathlib import Path

import numpy as np

from lattice.serialization import dump

logger = logging.getLogger(__name__)

TRACE_HEADER = ("restart", "iteration", "value", "residual", "norm", "step")


def format_cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def format_mode(mode):
    return " ".join(str(k) for k in mode)


class RunEmitter:
    """Writes the files of one run and remembers their paths"""

    def __init__(self, command, config):
        self.command = str(command)
        self.config = config
        self.directory = Path(config.output_dir)
        self.files = []

    def path(self, ext, suffix=""):
        suffix = f"-{suffix}" if suffix else ""
        return self.directory / f"{self.command}-{self.config.short_hash}{suffix}.{ext}"

    def _register(self, path):
        self.files.append(path)
        logger.debug("wrote %s", path)
        return path

    def write_table(self, header, rows, suffix=""):
        """``rows`` are sequences in header order or dicts keyed by it"""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path("csv", suffix)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                if isinstance(row, dict):
                    row = [row[column] for column in header]
                writer.writerow([format_cell(value) for value in row])
        return self._register(path)

    def write_trace(self, trace, suffix="trace"):
        return self.write_table(
            TRACE_HEADER,
            (
                (entry.restart, entry.iteration, entry.value, entry.residual, entry.norm, entry.step)
                for entry in trace
            ),
            suffix,
        )

    def write_field(self, f, index):
        self.directory.mkdir(parents=True, exist_ok=True)
        return self._register(dump(f, self.path("bin", f"field{index}")))

    def write_manifest(self, suffix="", **extra):
        """JSON manifest; its ``config`` entry reloads as a run config"""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path("json", suffix)
        document = {
            "command": self.command,
            "config_hash": self.config.config_hash,
            "config": self.config.to_dict(),
            "model": self.config.build_model().describe(),
            "files": [written.name for written in self.files] + [path.name],
            **extra,
        }
        path.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n")
        return self._register(path)
