"""Run manifests written next to every report."""

from __future__ import annotations

import hashlib
import json
import resource
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__


def file_digest(path, chunk=1 << 20) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        while block := fh.read(chunk):
            h.update(block)
    return "sha256:" + h.hexdigest()


def peak_rss_bytes() -> int:
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # kilobytes on Linux, bytes on macOS
    return rss if sys.platform == "darwin" else rss * 1024


@dataclass
class RunManifest:
    command: str
    parameters: dict
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    tool_version: str = __version__
    wall_time_s: float = 0.0
    peak_memory_bytes: int = 0
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def add_input(self, path):
        self.inputs[str(path)] = file_digest(path)
        sidecar = Path(str(path) + ".ids")
        if sidecar.exists():
            self.inputs[str(sidecar)] = file_digest(sidecar)

    def add_output(self, path):
        self.outputs.append(str(path))
        return path

    def finish(self, path) -> Path:
        self.wall_time_s = round(time.perf_counter() - self._started, 6)
        self.peak_memory_bytes = peak_rss_bytes()
        data = asdict(self)
        data.pop("_started")
        path = Path(path)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
