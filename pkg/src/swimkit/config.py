"""Tunable thresholds, loadable from a JSON config file.

``SWIMKIT_DATA_ROOT`` names the directory against which relative image paths
and manifests resolve; it defaults to the current directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

DATA_ROOT_ENV = "SWIMKIT_DATA_ROOT"


@dataclass(frozen=True)
class Config:
    iou_threshold: float = 0.5
    visibility_threshold: float = 0.10
    base_stride: int = 15
    dive_stride: int = 5
    seconds_per_box: float = 2.0

    @classmethod
    def load(cls, path: str | Path | None) -> "Config":
        if path is None:
            return cls()
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def data_root() -> Path:
    return Path(os.environ.get(DATA_ROOT_ENV, "."))
