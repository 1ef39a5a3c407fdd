"""Configuration loading for the toolkit's commands."""

import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from lib.algorithms import COLUMN_GATE_MODES
from lib.errors import ConfigError
from lib.wstate import STRATEGIES

log = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.yaml"
MAX_BRANCHES_ENV = "WQ_MAX_BRANCHES"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class QueensConfig:
    """Effective settings after file, environment and flag overrides."""

    max_branches: int = 1 << 20
    max_n: int = 8
    shots: int = 4096
    seed: int = 0
    column_gate: str = "cx"
    dynamic: bool = True
    wstate_strategy: str = "chain"
    verify_n_max: int = 5
    prune_threshold: float = 1e-14
    log_level: str = "WARNING"

    def validate(self) -> None:
        """Raise ConfigError on the first bad value."""
        for name in ("max_branches", "max_n", "shots", "verify_n_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"'{name}' must be a positive integer, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"'seed' must be a non-negative integer, got {self.seed!r}")
        if not isinstance(self.dynamic, bool):
            raise ConfigError(f"'dynamic' must be true or false, got {self.dynamic!r}")
        if self.column_gate not in COLUMN_GATE_MODES:
            raise ConfigError(f"'column_gate' must be one of {', '.join(COLUMN_GATE_MODES)}")
        if self.wstate_strategy not in STRATEGIES:
            raise ConfigError(f"'wstate_strategy' must be one of {', '.join(STRATEGIES)}")
        if isinstance(self.prune_threshold, bool) or not isinstance(self.prune_threshold, (int, float)):
            raise ConfigError(f"'prune_threshold' must be a number, got {self.prune_threshold!r}")
        if not 0 <= self.prune_threshold < 1e-6:
            raise ConfigError(f"'prune_threshold' must lie in [0, 1e-6), got {self.prune_threshold}")
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"'log_level' must be one of {', '.join(LOG_LEVELS)}")

    def with_overrides(self, **overrides: Any) -> "QueensConfig":
        """Copy with the non-None overrides applied and validated."""
        updated = replace(self, **{k: v for k, v in overrides.items() if v is not None})
        updated.validate()
        return updated


class ConfigLoader:
    """Loads QueensConfig from a YAML file plus the environment."""

    def __init__(self, config_path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None):
        """Initialize config loader.

        Args:
            config_path: YAML file to read (default: config/defaults.yaml)
            environ: Environment mapping (default: os.environ)
        """
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
        self.environ = os.environ if environ is None else environ

    def _load_file(self) -> Dict[str, Any]:
        if not self.config_path.exists():
            log.debug("No config file at %s, using built-in defaults", self.config_path)
            return {}
        try:
            with open(self.config_path, "r") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Corrupted config file {self.config_path}: {e}")
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {self.config_path} must hold a mapping")

        known = {f.name for f in fields(QueensConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
        return data

    def _env_overrides(self) -> Dict[str, Any]:
        raw = self.environ.get(MAX_BRANCHES_ENV)
        if raw is None or not raw.strip():
            return {}
        try:
            return {"max_branches": int(raw)}
        except ValueError:
            raise ConfigError(f"{MAX_BRANCHES_ENV} must be an integer, got '{raw}'")

    def load(self) -> QueensConfig:
        """Built-in defaults, then the file, then the environment.

        Raises:
            ConfigError: malformed file, unknown key, bad value or bad environment value
        """
        values = self._load_file()
        values.update(self._env_overrides())
        try:
            config = QueensConfig(**values)
        except TypeError as e:
            raise ConfigError(str(e))
        config.validate()
        return config
