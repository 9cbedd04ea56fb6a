"""Pipeline configuration: flat key=value files, environment and flags.

Precedence per setting: command-line flag, then the JT_<SETTING> environment
variable, then the config file (path from --config or JT_CONFIG), then the
built-in default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping, Optional

from .corpus import canonical_court_table_path
from .repair import canonical_correction_map_path
from .taxonomy import canonical_taxonomy_path

ENV_PREFIX = "JT_"
CONFIG_ENV = "JT_CONFIG"


@dataclass
class PipelineConfig:
    taxonomy: str = ""
    court_table: str = ""
    corrections: str = ""
    corpus_dir: str = "corpus"
    output_dir: str = "runs"
    backend: str = "replay"
    replay_fixtures: str = ""
    live_endpoint: str = ""
    live_model: str = ""
    live_timeout: float = 120.0
    concurrency: int = 4
    confidence: float = 0.95
    margin: float = 0.05
    seed: int = 0
    excerpt_chars: int = 4000
    token_budget: int = 180000
    retry_limit: int = 3
    run_id: str = ""
    started_at: str = ""
    static_dir: str = "frontend/dist"

    def __post_init__(self):
        if not self.taxonomy:
            self.taxonomy = str(canonical_taxonomy_path())
        if not self.court_table:
            self.court_table = str(canonical_court_table_path())
        if not self.corrections:
            self.corrections = str(canonical_correction_map_path())
        if not 0 < self.confidence < 1:
            raise ValueError(f"confidence must be in (0,1): {self.confidence}")
        if not 0 < self.margin < 1:
            raise ValueError(f"margin must be in (0,1): {self.margin}")
        if self.concurrency < 1:
            raise ValueError(f"concurrency must be >= 1: {self.concurrency}")
        if self.backend not in ("replay", "live"):
            raise ValueError(f"backend must be replay or live: {self.backend!r}")

    def snapshot(self) -> dict[str, str]:
        """Settings as stored in the run manifest; excludes the store location."""
        skip = {"output_dir", "run_id", "started_at"}
        return {
            f.name: str(getattr(self, f.name))
            for f in fields(self)
            if f.name not in skip
        }


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Parse flat "key=value" lines; blank lines and # comments are ignored."""
    values: dict[str, str] = {}
    for lineno, raw_line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw_line!r}")
        values[key.strip()] = value.strip()
    return values


def _coerce(name: str, raw: str) -> Any:
    for f in fields(PipelineConfig):
        if f.name == name:
            if f.type in ("int", int):
                return int(raw)
            if f.type in ("float", float):
                return float(raw)
            return raw
    raise KeyError(f"unknown setting: {name!r}")


def resolve_config(
    flag_values: Mapping[str, Any],
    environ: Optional[Mapping[str, str]] = None,
    config_path: Optional[str] = None,
) -> PipelineConfig:
    """Merge flags over environment over config file over defaults."""
    env = os.environ if environ is None else environ
    path = config_path or env.get(CONFIG_ENV)
    file_values = parse_config_file(path) if path else {}

    merged: dict[str, Any] = {}
    for f in fields(PipelineConfig):
        name = f.name
        if name in file_values:
            merged[name] = _coerce(name, file_values[name])
        env_key = ENV_PREFIX + name.upper()
        if env_key in env:
            merged[name] = _coerce(name, env[env_key])
        if flag_values.get(name) is not None:
            merged[name] = flag_values[name]
    return PipelineConfig(**merged)
