"""
Tests for mersenne-divisibility configuration management.
"""

import json
import os
import tempfile
from pathlib import Path

import toml

from mersenne_divisibility.config import (
    DEFAULT_MAX_BITS,
    ConfigManager,
    Configuration,
    FactorSettings,
    GuardSettings,
    OutputSettings,
    SweepSettings,
    create_default_config_manager,
)


class TestSettings:
    """Test configuration sections."""

    def test_default_guard_settings(self):
        """Test default guard settings."""
        settings = GuardSettings()

        assert settings.max_bits == 1_000_000
        assert settings.max_degree == 10_000

    def test_default_factor_settings(self):
        """Test default factor settings."""
        settings = FactorSettings()

        assert settings.trial_bound == 100_000
        assert settings.max_iterations == 2_000_000
        assert settings.seed == 0

    def test_default_sweep_settings(self):
        """Test that the default sweep grid is the verify preset."""
        settings = SweepSettings()

        assert settings.a_range == [2, 5]
        assert settings.m_range == [1, 24]
        assert settings.k_range == [1, 4]
        assert settings.d_range == [2, 6]
        assert settings.include_poly is False
        assert settings.jobs == 1
        assert settings.on_guard == "skip"

    def test_default_output_settings(self):
        """Test default output settings."""
        settings = OutputSettings()

        assert settings.format == "table"
        assert settings.timing is False


class TestConfiguration:
    """Test main configuration class."""

    def test_default_configuration(self):
        """Test default configuration."""
        config = Configuration()

        assert isinstance(config.guard, GuardSettings)
        assert isinstance(config.factor, FactorSettings)
        assert isinstance(config.sweep, SweepSettings)
        assert isinstance(config.output, OutputSettings)
        assert config.validate() == []

    def test_configuration_from_dict(self):
        """Test creating configuration from dictionary."""
        data = {
            "guard": {"max_bits": 5000},
            "factor": {"seed": 7},
            "sweep": {"a_range": ["2", "3"], "jobs": 4},
            "output": {"format": "json"},
        }

        config = Configuration.from_dict(data)

        assert config.guard.max_bits == 5000
        assert config.guard.max_degree == 10_000
        assert config.factor.seed == 7
        assert config.sweep.a_range == [2, 3]
        assert config.sweep.m_range == [1, 24]
        assert config.sweep.jobs == 4
        assert config.output.format == "json"

    def test_configuration_to_dict(self):
        """Test converting configuration to dictionary."""
        data = Configuration().to_dict()

        assert data["guard"]["max_bits"] == DEFAULT_MAX_BITS
        assert data["sweep"]["d_range"] == [2, 6]
        assert data["output"]["timing"] is False

    def test_validation_range_minima(self):
        """Test validation of grid lower bounds."""
        config = Configuration()
        config.sweep.a_range = [1, 5]
        config.sweep.d_range = [2, 6, 8]

        errors = config.validate()
        assert any("a_range lower bound must be >= 2" in error for error in errors)
        assert any("d_range must have exactly two bounds" in error for error in errors)

    def test_validation_invalid_values(self):
        """Test validation of counts and enums."""
        config = Configuration()
        config.guard.max_bits = 0
        config.sweep.jobs = 0
        config.sweep.on_guard = "ignore"
        config.output.format = "xml"

        errors = config.validate()
        assert any("max_bits must be positive" in error for error in errors)
        assert any("jobs must be >= 1" in error for error in errors)
        assert any("on_guard must be one of" in error for error in errors)
        assert any("output format must be one of" in error for error in errors)


class TestConfigManager:
    """Test configuration manager."""

    def test_config_manager_initialization(self):
        """Test configuration manager initialization."""
        manager = ConfigManager()
        assert manager.config_path is None
        assert isinstance(manager.config, Configuration)

    def test_load_config_no_file(self):
        """Test loading configuration when no file exists."""
        with tempfile.TemporaryDirectory() as temp_dir:
            cwd = os.getcwd()
            os.chdir(temp_dir)
            try:
                config = ConfigManager().load_config()
            finally:
                os.chdir(cwd)

        assert config.guard.max_bits == DEFAULT_MAX_BITS

    def test_load_config_json_file(self):
        """Test loading configuration from JSON file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "mersenne-div.config.json"
            config_path.write_text(json.dumps({"guard": {"max_bits": 4096}}))

            config = ConfigManager(config_path).load_config()

        assert config.guard.max_bits == 4096

    def test_load_config_toml_file(self):
        """Test loading configuration from TOML file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "mersenne-div.config.toml"
            config_path.write_text(toml.dumps({"sweep": {"k_range": [1, 2]}}))

            config = ConfigManager(config_path).load_config()

        assert config.sweep.k_range == [1, 2]

    def test_discover_pyproject_tool_section(self):
        """Test discovery of a [tool.mersenne-div] table in pyproject.toml."""
        with tempfile.TemporaryDirectory() as temp_dir:
            pyproject = Path(temp_dir) / "pyproject.toml"
            pyproject.write_text(toml.dumps({"tool": {"mersenne-div": {"factor": {"seed": 3}}}}))
            nested = Path(temp_dir) / "sub" / "dir"
            nested.mkdir(parents=True)

            cwd = os.getcwd()
            os.chdir(nested)
            try:
                manager = ConfigManager()
                config = manager.load_config()
            finally:
                os.chdir(cwd)

            assert manager.config_path.name == "pyproject.toml"
            assert config.factor.seed == 3

    def test_pyproject_without_tool_section_is_ignored(self):
        """Test that an unrelated pyproject.toml is not picked up."""
        with tempfile.TemporaryDirectory() as temp_dir:
            (Path(temp_dir) / "pyproject.toml").write_text('[project]\nname = "other"\n')

            cwd = os.getcwd()
            os.chdir(temp_dir)
            try:
                manager = ConfigManager()
                config = manager.load_config()
            finally:
                os.chdir(cwd)

        assert config == Configuration()

    def test_load_invalid_file_falls_back(self):
        """Test that an unreadable configuration falls back to defaults."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "broken.json"
            config_path.write_text("{not json")

            config = ConfigManager(config_path).load_config()

        assert config == Configuration()

    def test_save_config_json(self):
        """Test saving configuration to JSON file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "config.json"

            manager = ConfigManager()
            manager.config.guard.max_bits = 2048
            manager.save_config(config_path)

            data = json.loads(config_path.read_text())
            assert data["guard"]["max_bits"] == 2048

    def test_save_config_toml(self):
        """Test saving configuration to TOML file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "config.toml"

            manager = ConfigManager()
            manager.config.output.format = "csv"
            manager.save_config(config_path)

            data = toml.load(config_path)
            assert data["output"]["format"] == "csv"

    def test_create_default_config(self):
        """Test creating a default configuration file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "mersenne-div.config.json"

            manager = create_default_config_manager()
            manager.create_default_config(config_path)

            assert config_path.exists()
            assert Configuration.from_dict(json.loads(config_path.read_text())) == Configuration()

    def test_update_from_args(self):
        """Test overriding configuration from command-line values."""
        manager = ConfigManager()
        manager.update_from_args({
            "max_bits": 100,
            "seed": None,
            "jobs": 2,
            "a_range": (2, 3),
            "format": "json",
            "timing": True,
            "include_poly": False,
        })

        config = manager.get_config()
        assert config.guard.max_bits == 100
        assert config.factor.seed == 0
        assert config.sweep.jobs == 2
        assert config.sweep.a_range == [2, 3]
        assert config.sweep.include_poly is False
        assert config.output.format == "json"
        assert config.output.timing is True
