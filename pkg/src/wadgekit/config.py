"""
Configuration management for wadgekit
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from .errors import ValidationError

logger = logging.getLogger(__name__)

DEFAULT_UNFOLD_LIMIT = 1_000_000
DEFAULT_BRUTEFORCE_STATE_LIMIT = 20
DEFAULT_BRUTEFORCE_POSET_LIMIT = 8
DEFAULT_BENCH_REPETITIONS = 5

UNFOLD_LIMIT_ENV = "WADGEKIT_UNFOLD_LIMIT"
CONFIG_DIR_ENV = "WADGEKIT_CONFIG_DIR"


class Config:
    """Configuration manager for wadgekit"""

    def __init__(self, config_dir: Optional[Path] = None):
        env_dir = os.environ.get(CONFIG_DIR_ENV)
        self.config_dir = config_dir or (Path(env_dir) if env_dir else Path.home() / ".wadgekit")
        self.config_file = self.config_dir / "config.json"
        self._config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, falling back to defaults"""
        config = self.defaults()
        if self.config_file.exists():
            try:
                with open(self.config_file, "r", encoding="utf-8") as f:
                    config.update(json.load(f))
            except (OSError, ValueError) as e:
                logger.warning("Error loading config %s: %s", self.config_file, e)
        return config

    @staticmethod
    def defaults() -> Dict[str, Any]:
        return {
            "unfold_limit": DEFAULT_UNFOLD_LIMIT,
            "bruteforce_state_limit": DEFAULT_BRUTEFORCE_STATE_LIMIT,
            "bruteforce_poset_limit": DEFAULT_BRUTEFORCE_POSET_LIMIT,
            "bench_repetitions": DEFAULT_BENCH_REPETITIONS,
            "log_level": "WARNING",
        }

    def save_config(self) -> bool:
        """Save configuration to file"""
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(self._config, f, indent=2)
            return True
        except OSError as e:
            logger.error("Error saving config %s: %s", self.config_file, e)
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        return self._config.get(key, default)

    def set(self, key: str, value: Any) -> None:
        """Set configuration value"""
        self._config[key] = value

    def _get_int(self, key: str, default: int) -> int:
        value = self.get(key, default)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValidationError(f"config value {key}={value!r} is not an integer")

    @property
    def unfold_limit(self) -> int:
        """Node limit for unfolding; the environment variable wins over the file"""
        env_value = os.environ.get(UNFOLD_LIMIT_ENV)
        if env_value is not None:
            try:
                return int(env_value)
            except ValueError:
                raise ValidationError(f"{UNFOLD_LIMIT_ENV}={env_value!r} is not an integer")
        return self._get_int("unfold_limit", DEFAULT_UNFOLD_LIMIT)

    @property
    def bruteforce_state_limit(self) -> int:
        return self._get_int("bruteforce_state_limit", DEFAULT_BRUTEFORCE_STATE_LIMIT)

    @property
    def bruteforce_poset_limit(self) -> int:
        return self._get_int("bruteforce_poset_limit", DEFAULT_BRUTEFORCE_POSET_LIMIT)

    @property
    def bench_repetitions(self) -> int:
        return self._get_int("bench_repetitions", DEFAULT_BENCH_REPETITIONS)

    @property
    def log_level(self) -> str:
        """Get logging level name"""
        name = str(self.get("log_level", "WARNING")).upper()
        if not isinstance(logging.getLevelName(name), int):
            raise ValidationError(f"unknown log level {name!r}")
        return name
