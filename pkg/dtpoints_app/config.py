"""
Configuration management for the dtpoints application.

This module handles loading, saving, and managing application configuration
including worker counts, output format, numeric tolerances and oracle limits.
"""

import json
from pathlib import Path
from typing import Any

from dtpoints_app.constants import (
    ALL_OUTPUT_FORMATS,
    DEFAULT_FORMAT,
    DEFAULT_JOBS,
    DEFAULT_MAX_TERMS,
    DEFAULT_ORACLE_BUDGET,
    DEFAULT_SADDLE_RTOL,
    DEFAULT_SANDWICH_SLACK,
    DEFAULT_SUM_TOL,
    ConfigKeys,
    ConfigSections,
)
from dtpoints_app.logger import get_logger
from dtpoints_app.utils import get_config_path


class ConfigManager:
    """Manages application configuration settings."""

    def __init__(self, config_file: Path | None = None):
        """Initialize the configuration manager."""
        self.logger = get_logger(__name__)
        self.config_file = config_file if config_file is not None else get_config_path()
        self._overrides: dict[str, Any] = {}
        self._config = self._load_config()

    def _get_default_config(self) -> dict[str, Any]:
        """Return default configuration values."""
        return {
            ConfigSections.GLOBAL: {
                ConfigKeys.JOBS: DEFAULT_JOBS,
                ConfigKeys.FORMAT: DEFAULT_FORMAT,
                ConfigKeys.DEBUG: False,
            },
            ConfigSections.TOLERANCES: {
                ConfigKeys.SUM_TOL: DEFAULT_SUM_TOL,
                ConfigKeys.SADDLE_RTOL: DEFAULT_SADDLE_RTOL,
                ConfigKeys.SANDWICH_SLACK: DEFAULT_SANDWICH_SLACK,
                ConfigKeys.MAX_TERMS: DEFAULT_MAX_TERMS,
            },
            ConfigSections.LIMITS: {
                ConfigKeys.ORACLE_BUDGET: DEFAULT_ORACLE_BUDGET,
            },
        }

    def _load_config(self) -> dict[str, Any]:
        """Load configuration from the JSON config file."""
        if self.config_file.exists():
            try:
                with open(self.config_file, encoding="utf-8") as f:
                    raw_config = json.load(f)
                config = self._normalize_config(raw_config)
                if config != raw_config:
                    self._config = config
                    self.save_config()
                return config
            except Exception as e:
                self.logger.error("Error loading config: %s", e)
                return self._get_default_config()
        return self._get_default_config()

    def _normalize_config(self, config: dict[str, Any]) -> dict[str, Any]:
        """Merge defaults into every section and drop unknown sections."""
        defaults = self._get_default_config()
        normalized: dict[str, Any] = {}
        for section, section_defaults in defaults.items():
            current = config.get(section, {})
            if not isinstance(current, dict):
                self.logger.warning("Ignoring malformed config section %s", section)
                current = {}
            normalized[section] = section_defaults | current

        fmt = normalized[ConfigSections.GLOBAL][ConfigKeys.FORMAT]
        if fmt not in ALL_OUTPUT_FORMATS:
            self.logger.warning("Unknown output format %r, using %s", fmt, DEFAULT_FORMAT)
            normalized[ConfigSections.GLOBAL][ConfigKeys.FORMAT] = DEFAULT_FORMAT
        return normalized

    def save_config(self) -> None:
        """Persist current configuration to the JSON config file."""
        try:
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(self._config, f, indent=4)
        except Exception as e:
            self.logger.error("Error saving config: %s", e)

    def _section_of(self, key: str) -> str:
        """Return the section that owns ``key``."""
        for section, values in self._get_default_config().items():
            if key in values:
                return section
        raise KeyError(f"Unknown configuration key: {key}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value, honouring per-run overrides."""
        if key in self._overrides:
            return self._overrides[key]
        try:
            section = self._section_of(key)
        except KeyError:
            return default
        return self._config[section].get(key, default)

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value and save to file."""
        section = self._section_of(key)
        old_value = self._config[section].get(key)
        self._config[section][key] = value
        self.save_config()
        self.logger.info("Configuration updated: %s = %s (was: %s)", key, value, old_value)

    def override(self, **values: Any) -> None:
        """Apply per-run overrides (never persisted); ``None`` values are skipped."""
        for key, value in values.items():
            if value is None:
                continue
            self._section_of(key)
            self._overrides[key] = value
            self.logger.debug("Run override: %s = %s", key, value)

    def get_all(self) -> dict[str, Any]:
        """Get all persisted configuration values."""
        return {section: values.copy() for section, values in self._config.items()}

    @property
    def jobs(self) -> int:
        """Number of worker processes for parallel enumeration."""
        return int(self.get(ConfigKeys.JOBS, DEFAULT_JOBS))

    @property
    def output_format(self) -> str:
        """Default output format."""
        return self.get(ConfigKeys.FORMAT, DEFAULT_FORMAT)

    @property
    def debug(self) -> bool:
        """Whether DEBUG logging is requested by configuration."""
        return bool(self.get(ConfigKeys.DEBUG, False))

    @property
    def sum_tol(self) -> float:
        """Relative tail bound for the numeric sums."""
        return float(self.get(ConfigKeys.SUM_TOL, DEFAULT_SUM_TOL))

    @property
    def saddle_rtol(self) -> float:
        """Relative tolerance of the saddle bisection."""
        return float(self.get(ConfigKeys.SADDLE_RTOL, DEFAULT_SADDLE_RTOL))

    @property
    def sandwich_slack(self) -> float:
        """Relative slack allowed when checking the saddle sandwich."""
        return float(self.get(ConfigKeys.SANDWICH_SLACK, DEFAULT_SANDWICH_SLACK))

    @property
    def max_terms(self) -> int:
        """Hard cap on the number of m-terms in any numeric sum."""
        return int(self.get(ConfigKeys.MAX_TERMS, DEFAULT_MAX_TERMS))

    @property
    def oracle_budget(self) -> int:
        """Maximum number of matrix pairs the brute-force oracles may visit."""
        return int(self.get(ConfigKeys.ORACLE_BUDGET, DEFAULT_ORACLE_BUDGET))
