"""Report envelopes, run manifests and plot CSVs."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import tempfile
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .metric import CoarseInputError


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"))


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class RunManifest:
    def __init__(self, argv: Sequence[str], inputs: Sequence[str] = (), params: dict | None = None):
        self.argv = list(argv)
        self.inputs = {str(p): file_digest(p) for p in inputs}
        self.params = params or {}
        self.started = time.perf_counter()

    def to_dict(self) -> dict:
        return {
            "command": self.argv,
            "inputs": self.inputs,
            "params": self.params,
            "tool_version": __version__,
            "wall_time_s": round(time.perf_counter() - self.started, 6),
        }


def build_report(manifest: RunManifest, payload: dict) -> dict:
    body = _plain(payload)
    return {
        "manifest": manifest.to_dict(),
        "payload": body,
        "payload_sha256": hashlib.sha256(canonical_json(body).encode()).hexdigest(),
    }


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_profile_csv(rows: Sequence[tuple[float, float]], path, header=("x", "value")) -> None:
    """Two-column CSV in input order; infinite values are written as ``inf``."""
    if not rows:
        raise CoarseInputError("profile is empty")
    lines = [",".join(header)]
    for x, v in rows:
        lines.append(f"{float(x)!r},{'inf' if v == math.inf else repr(float(v))}")
    atomic_write(path, "\n".join(lines) + "\n")


def read_profile_csv(path) -> list[tuple[float, float]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return [(float(x), float(v)) for x, v in rows[1:]]
