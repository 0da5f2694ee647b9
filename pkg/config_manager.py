"""Configuration manager for JSON persistence and flat key=value run files."""

import json
import logging
from pathlib import Path

from config import Config, DEFAULT_CONFIG

logger = logging.getLogger(__name__)


def read_flat_file(path: str | Path) -> dict[str, str]:
    """Read ``key=value`` lines; blank lines and ``#`` comments are skipped.

    Raises:
        ValueError: a line has no ``=`` or an empty key
    """
    values: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        values[key.replace("-", "_")] = value.strip()
    return values


class ConfigManager:
    """Loads settings from JSON, falling back to defaults."""

    def __init__(self, config_path: str | Path = "config.json") -> None:
        self.config_path = Path(config_path)
        self._config: Config | None = None

    @property
    def config(self) -> Config:
        if self._config is None:
            self._config = self.load()
        return self._config

    def load(self) -> Config:
        """Load config from JSON file, or return defaults if not found."""
        if self.config_path.exists():
            try:
                with open(self.config_path) as f:
                    data = json.load(f)
                self._config = Config.from_dict(data)
                logger.info("Loaded config from %s", self.config_path)
            except (json.JSONDecodeError, ValueError, TypeError) as e:
                logger.warning("Error loading config %s: %s, using defaults", self.config_path, e)
                self._config = Config.from_dict(DEFAULT_CONFIG.to_dict())
        else:
            logger.info("No config file at %s, using defaults", self.config_path)
            self._config = Config.from_dict(DEFAULT_CONFIG.to_dict())
        return self._config
