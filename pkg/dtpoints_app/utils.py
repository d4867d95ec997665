"""
Utility functions for the dtpoints application.

This module contains helpers for file paths and argument checking used
throughout the package.
"""

import os
from pathlib import Path

from dtpoints_app.constants import APP_HOME_ENV, APP_NAME


def get_app_data_dir() -> Path:
    """Return the per-user data directory for config and logs."""
    override = os.environ.get(APP_HOME_ENV)
    if override:
        app_data = Path(override)
    elif os.environ.get("APPDATA"):
        app_data = Path(os.environ["APPDATA"]) / APP_NAME
    else:
        app_data = Path.home() / f".{APP_NAME}"
    app_data.mkdir(parents=True, exist_ok=True)
    return app_data


def get_config_path() -> Path:
    """Return the config file path in the app data directory."""
    return get_app_data_dir() / "config.json"


def get_log_file_path() -> Path:
    """Return the log file path in the app data directory."""
    return get_app_data_dir() / "dtpoints.log"


def require_positive(name: str, value: int) -> int:
    """Return ``value`` if it is an integer >= 1, else raise ValueError."""
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return value


def require_nonnegative(name: str, value: int) -> int:
    """Return ``value`` if it is an integer >= 0, else raise ValueError."""
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    return value


def compositions(total: int, parts: int):
    """Yield every ordered tuple of ``parts`` nonnegative ints summing to ``total``.

    Tuples come out in lexicographic order.
    """
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first, *rest)
