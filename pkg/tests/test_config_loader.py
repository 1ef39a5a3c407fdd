"""Tests for configuration loading."""

import shutil
import tempfile
from pathlib import Path

import pytest

from lib.config_loader import DEFAULT_CONFIG_PATH, ConfigLoader, QueensConfig
from lib.errors import ConfigError


class TestConfigLoader:
    """Test cases for ConfigLoader."""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def _write(self, text):
        path = Path(self.temp_dir, "config.yaml")
        path.write_text(text)
        return str(path)

    def test_shipped_defaults(self):
        assert DEFAULT_CONFIG_PATH.exists()
        config = ConfigLoader(environ={}).load()
        assert config == QueensConfig()
        assert config.max_branches == 2 ** 20
        assert config.prune_threshold == 1e-14

    def test_missing_file_uses_defaults(self):
        config = ConfigLoader(str(Path(self.temp_dir, "absent.yaml")), environ={}).load()
        assert config == QueensConfig()

    def test_empty_file(self):
        assert ConfigLoader(self._write(""), environ={}).load() == QueensConfig()

    def test_file_values(self):
        config = ConfigLoader(self._write("max_n: 6\ncolumn_gate: cz\ndynamic: false\n"), environ={}).load()
        assert (config.max_n, config.column_gate, config.dynamic) == (6, "cz", False)

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="Unknown config keys: colour"):
            ConfigLoader(self._write("colour: red\n"), environ={}).load()

    def test_bad_values(self):
        for text in ("max_n: 0\n", "column_gate: swap\n", "dynamic: maybe\n", "seed: -1\n", "shots: 1.5\n"):
            with pytest.raises(ConfigError):
                ConfigLoader(self._write(text), environ={}).load()

    def test_not_a_mapping(self):
        with pytest.raises(ConfigError, match="mapping"):
            ConfigLoader(self._write("- 1\n- 2\n"), environ={}).load()

    def test_corrupted_yaml(self):
        with pytest.raises(ConfigError, match="Corrupted"):
            ConfigLoader(self._write("max_n: [1\n"), environ={}).load()

    def test_environment_overrides_file(self):
        path = self._write("max_branches: 100\n")
        config = ConfigLoader(path, environ={"WQ_MAX_BRANCHES": "64"}).load()
        assert config.max_branches == 64

    def test_bad_environment(self):
        with pytest.raises(ConfigError, match="WQ_MAX_BRANCHES"):
            ConfigLoader(self._write(""), environ={"WQ_MAX_BRANCHES": "lots"}).load()

    def test_with_overrides(self):
        config = QueensConfig().with_overrides(max_branches=10, shots=None)
        assert config.max_branches == 10
        assert config.shots == 4096
        with pytest.raises(ConfigError):
            QueensConfig().with_overrides(max_branches=0)
