"""
Unit tests for configuration, paths and logging setup.
"""

import json
import logging
import tempfile
import tomllib
import unittest
from pathlib import Path
from unittest.mock import patch

from dtpoints_app.config import ConfigManager
from dtpoints_app.constants import (
    APP_HOME_ENV,
    APP_NAME,
    APP_VERSION,
    DEFAULT_ORACLE_BUDGET,
    DEFAULT_SUM_TOL,
    ConfigKeys,
    ConfigSections,
    OutputFormats,
)
from dtpoints_app.logger import setup_logging, shutdown_logging
from dtpoints_app.utils import compositions, get_app_data_dir, require_nonnegative, require_positive

# pylint: disable=protected-access


class TestGetAppDataDir(unittest.TestCase):
    """Tests for get_app_data_dir."""

    def test_home_override(self):
        """The DTPOINTS_HOME variable wins."""
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "data"
            with patch.dict("os.environ", {APP_HOME_ENV: str(target)}):
                self.assertEqual(get_app_data_dir(), target)
            self.assertTrue(target.is_dir())

    @patch.dict("os.environ", {"APPDATA": "C:\\Users\\Test\\AppData\\Roaming"}, clear=True)
    @patch("dtpoints_app.utils.Path.mkdir")
    def test_appdata(self, mock_mkdir):
        """APPDATA is used on Windows-like environments."""
        result = get_app_data_dir()
        self.assertTrue(str(result).endswith(APP_NAME))
        mock_mkdir.assert_called_once_with(parents=True, exist_ok=True)

    @patch("dtpoints_app.utils.Path.home")
    @patch.dict("os.environ", {}, clear=True)
    def test_dot_directory(self, mock_home):
        """Without either variable a dot directory in home is used."""
        with tempfile.TemporaryDirectory() as tmp:
            mock_home.return_value = Path(tmp)
            self.assertEqual(get_app_data_dir().name, f".{APP_NAME}")


class TestConfigManager(unittest.TestCase):
    """Tests for ConfigManager."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.config_file = Path(self.temp_dir.name) / "config.json"

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_defaults_without_file(self):
        """A missing file gives the defaults."""
        config = ConfigManager(self.config_file)
        self.assertEqual(config.jobs, 1)
        self.assertEqual(config.output_format, OutputFormats.JSON)
        self.assertEqual(config.sum_tol, DEFAULT_SUM_TOL)
        self.assertEqual(config.oracle_budget, DEFAULT_ORACLE_BUDGET)
        self.assertFalse(config.debug)

    def test_set_persists(self):
        """set() writes through to the file."""
        config = ConfigManager(self.config_file)
        config.set(ConfigKeys.JOBS, 4)
        saved = json.loads(self.config_file.read_text(encoding="utf-8"))
        self.assertEqual(saved[ConfigSections.GLOBAL][ConfigKeys.JOBS], 4)
        self.assertEqual(ConfigManager(self.config_file).jobs, 4)

    def test_missing_keys_merged(self):
        """A partial file is completed with defaults and re-saved."""
        self.config_file.write_text(
            json.dumps({ConfigSections.TOLERANCES: {ConfigKeys.SUM_TOL: 1e-9}}), encoding="utf-8"
        )
        config = ConfigManager(self.config_file)
        self.assertEqual(config.sum_tol, 1e-9)
        self.assertEqual(config.jobs, 1)
        saved = json.loads(self.config_file.read_text(encoding="utf-8"))
        self.assertIn(ConfigSections.LIMITS, saved)

    def test_unreadable_file(self):
        """Broken JSON falls back to defaults."""
        self.config_file.write_text("{not json", encoding="utf-8")
        with self.assertLogs("dtpoints_app.config", level="ERROR"):
            config = ConfigManager(self.config_file)
        fresh = ConfigManager(Path(self.temp_dir.name) / "fresh.json")
        self.assertEqual(config.get_all(), fresh.get_all())

    def test_unknown_format_replaced(self):
        """An unknown output format is reset to JSON."""
        self.config_file.write_text(
            json.dumps({ConfigSections.GLOBAL: {ConfigKeys.FORMAT: "xml"}}), encoding="utf-8"
        )
        self.assertEqual(ConfigManager(self.config_file).output_format, OutputFormats.JSON)

    def test_overrides_not_saved(self):
        """Per-run overrides are visible but never written."""
        config = ConfigManager(self.config_file)
        config.override(**{ConfigKeys.JOBS: 8, ConfigKeys.SUM_TOL: None})
        self.assertEqual(config.jobs, 8)
        self.assertEqual(config.sum_tol, DEFAULT_SUM_TOL)
        self.assertEqual(ConfigManager(self.config_file).jobs, 1)

    def test_unknown_key(self):
        """Unknown keys give the default on get and fail on set."""
        config = ConfigManager(self.config_file)
        self.assertEqual(config.get("nothing", 5), 5)
        with self.assertRaises(KeyError):
            config.set("nothing", 1)


class TestLogging(unittest.TestCase):
    """Tests for setup_logging."""

    def test_file_handler_created(self):
        """A log file is created when the root logger has no handlers."""
        root = logging.getLogger()
        saved, level = root.handlers[:], root.level
        for handler in saved:
            root.removeHandler(handler)
        try:
            with tempfile.TemporaryDirectory() as tmp:
                log_file = Path(tmp) / "run.log"
                setup_logging(log_file, debug=True)
                self.assertEqual(root.level, logging.DEBUG)
                logging.getLogger("dtpoints_app.test").info("hello")
                shutdown_logging()
                self.assertIn("hello", log_file.read_text(encoding="utf-8"))
        finally:
            root.setLevel(level)
            for handler in saved:
                root.addHandler(handler)


class TestHelpers(unittest.TestCase):
    """Small argument helpers."""

    def test_require(self):
        """Integers are range-checked, bools rejected."""
        self.assertEqual(require_positive("r", 3), 3)
        self.assertEqual(require_nonnegative("n", 0), 0)
        for bad in (0, -1, True, 1.5):
            with self.assertRaises(ValueError):
                require_positive("r", bad)

    def test_compositions(self):
        """Lexicographic weak compositions."""
        self.assertEqual(list(compositions(2, 2)), [(0, 2), (1, 1), (2, 0)])
        self.assertEqual(len(list(compositions(4, 3))), 15)

    def test_version_matches_pyproject(self):
        """Ensure APP_VERSION matches pyproject.toml version."""
        pyproject_path = Path(__file__).parent.parent / "pyproject.toml"
        content = pyproject_path.read_text(encoding="utf-8")
        version_line = next(
            (line for line in content.splitlines() if line.strip().startswith("version")),
            "",
        )
        _, value = version_line.split("=", 1)
        self.assertEqual(APP_VERSION, value.strip().strip('"').strip("'"))

    def test_test_only_dependencies(self):
        """mpmath is a dev dependency and no package module imports it."""
        root = Path(__file__).parent.parent
        with open(root / "pyproject.toml", "rb") as f:
            manifest = tomllib.load(f)
        runtime = " ".join(manifest["project"]["dependencies"])
        dev = " ".join(manifest["dependency-groups"]["dev"])
        self.assertNotIn("mpmath", runtime)
        self.assertIn("mpmath", dev)
        for module in (root / "dtpoints_app").glob("*.py"):
            self.assertNotIn("import mpmath", module.read_text(encoding="utf-8"), module.name)


if __name__ == "__main__":
    unittest.main()
