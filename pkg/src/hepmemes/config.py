"""Run configuration: a plain ``key = value`` file, overridden by env and CLI flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

OUTPUT_DIR_ENV = "HEPMEMES_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    abstracts: str | None = None
    edges: str | None = None
    name_table: str | None = None
    stopwords: str | None = None
    lexicon: str | None = None
    output_dir: str = "hepmemes-out"
    snapshot: str | None = None
    gender_threshold: float = 0.95
    min_count: int = 5
    meme_threshold: float = 0.08
    include_title: bool = False
    universe_mode: str = "all"
    self_citation_match: str = "first"
    threads: int = 0

    @property
    def snapshot_dir(self) -> Path:
        return Path(self.snapshot) if self.snapshot else Path(self.output_dir) / "snapshot"

    @property
    def workers(self) -> int:
        return self.threads or (os.cpu_count() or 1)

    def validate(self) -> None:
        if not 0.5 < self.gender_threshold <= 1.0:
            raise ConfigError(f"gender_threshold must be in (0.5, 1], got {self.gender_threshold}")
        if self.min_count < 1:
            raise ConfigError(f"min_count must be >= 1, got {self.min_count}")
        if not 0.0 <= self.meme_threshold <= 1.0:
            raise ConfigError(f"meme_threshold must be in [0, 1], got {self.meme_threshold}")
        if self.universe_mode not in ("all", "citing"):
            raise ConfigError(f"universe_mode must be 'all' or 'citing', got {self.universe_mode!r}")
        if self.self_citation_match not in ("first", "any"):
            raise ConfigError(f"self_citation_match must be 'first' or 'any', got {self.self_citation_match!r}")
        if self.threads < 0:
            raise ConfigError(f"threads must be >= 0, got {self.threads}")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind == "bool":
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_config_text(text: str) -> dict:
    values = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults < config file < $HEPMEMES_OUTPUT_DIR < explicit overrides (None values ignored)."""
    values: dict = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    env_out = os.environ.get(OUTPUT_DIR_ENV)
    if env_out:
        values["output_dir"] = env_out
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = v
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg
