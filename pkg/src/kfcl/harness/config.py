"""Experiment configuration."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import ConfigError

KINDS = ("kfcl", "lemma-rank", "two-orders", "d-orders", "chi-demo", "sharpness", "validate-cover")
MIN_RESOLUTION = 100

_NEEDS_COVER = {"kfcl", "lemma-rank", "two-orders", "d-orders", "validate-cover"}


@dataclass
class ExperimentConfig:
    kind: str
    cover: str | None = None
    resolution: int = 3600
    seed: int = 0
    order_seed: int | None = None
    orders: int | None = None
    d: int | None = None
    m: int | None = None
    point: list[float] | None = None
    epsilon: float | None = None
    workers: int = 1
    output: str | None = None
    csv: str | None = None
    anchors: bool = True
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; choose one of {', '.join(KINDS)}")
        if self.kind in _NEEDS_COVER and not self.cover:
            raise ConfigError(f"experiment {self.kind!r} needs a cover (file path or builtin name)")
        if self.kind == "sharpness" and (self.d is None or self.m is None):
            raise ConfigError("sharpness needs both d and m")
        if self.kind == "d-orders" and (self.orders is None or self.orders < 2):
            raise ConfigError("d-orders needs 'orders' >= 2")
        if self.resolution < MIN_RESOLUTION:
            raise ConfigError(f"grid resolution must be >= {MIN_RESOLUTION}, got {self.resolution}")
        if self.resolution % 2:
            raise ConfigError("grid resolution must be even (points come in antipodal pairs)")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an explicit integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def order_count(self) -> int:
        if self.kind == "kfcl":
            return 1
        if self.kind in ("two-orders", "lemma-rank"):
            return self.orders or 2
        return self.orders or 1

    def echo(self) -> dict:
        """Configuration fields that determine the result (no output paths, no worker count)."""
        out = asdict(self)
        for key in ("output", "csv", "workers"):
            out.pop(key)
        if not out["extra"]:
            out.pop("extra")
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        if "kind" not in data:
            raise ConfigError("configuration needs a 'kind'")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from None
        return cls.from_dict(data)
