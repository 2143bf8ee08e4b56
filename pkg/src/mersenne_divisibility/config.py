"""
Configuration management for mersenne-divisibility.

This module provides functionality to load, validate, and manage configuration
for the library and its command-line harness, supporting JSON, TOML (including
a ``[tool.mersenne-div]`` table in ``pyproject.toml``) and command-line overrides.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import toml


logger = logging.getLogger(__name__)

DEFAULT_MAX_BITS = 1_000_000
DEFAULT_MAX_DEGREE = 10_000
DEFAULT_TRIAL_BOUND = 100_000
DEFAULT_MAX_ITERATIONS = 2_000_000

OUTPUT_FORMATS = ("json", "csv", "table")
GUARD_POLICIES = ("skip", "fail")


@dataclass
class GuardSettings:
    """Resource guards for big-integer and polynomial work."""
    max_bits: int = DEFAULT_MAX_BITS
    max_degree: int = DEFAULT_MAX_DEGREE


@dataclass
class FactorSettings:
    """Effort budget of the factorizer."""
    trial_bound: int = DEFAULT_TRIAL_BOUND
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    seed: int = 0


@dataclass
class SweepSettings:
    """Default sweep grid (the bundled "verify" preset)."""
    a_range: List[int] = field(default_factory=lambda: [2, 5])
    m_range: List[int] = field(default_factory=lambda: [1, 24])
    k_range: List[int] = field(default_factory=lambda: [1, 4])
    d_range: List[int] = field(default_factory=lambda: [2, 6])
    include_poly: bool = False
    jobs: int = 1
    on_guard: str = "skip"  # 'skip', 'fail'


@dataclass
class OutputSettings:
    """Output settings configuration."""
    format: str = "table"  # 'json', 'csv', 'table'
    timing: bool = False


@dataclass
class Configuration:
    """Main configuration class."""
    guard: GuardSettings = field(default_factory=GuardSettings)
    factor: FactorSettings = field(default_factory=FactorSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Configuration":
        """Create configuration from dictionary."""
        config = cls()

        if 'guard' in data:
            config.guard = GuardSettings(**data['guard'])

        if 'factor' in data:
            config.factor = FactorSettings(**data['factor'])

        if 'sweep' in data:
            sweep_data = dict(data['sweep'])
            for key in ('a_range', 'm_range', 'k_range', 'd_range'):
                if key in sweep_data:
                    sweep_data[key] = [int(v) for v in sweep_data[key]]
            config.sweep = SweepSettings(**sweep_data)

        if 'output' in data:
            config.output = OutputSettings(**data['output'])

        return config

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return asdict(self)

    def validate(self) -> List[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if self.guard.max_bits <= 0:
            errors.append("max_bits must be positive")

        if self.guard.max_degree <= 0:
            errors.append("max_degree must be positive")

        if self.factor.trial_bound < 2:
            errors.append("trial_bound must be >= 2")

        if self.factor.max_iterations <= 0:
            errors.append("max_iterations must be positive")

        if self.factor.seed < 0:
            errors.append("seed must be non-negative")

        for name, minimum in (('a_range', 2), ('m_range', 1), ('k_range', 1), ('d_range', 2)):
            bounds = getattr(self.sweep, name)
            if len(bounds) != 2:
                errors.append(f"{name} must have exactly two bounds")
            elif bounds[0] < minimum:
                errors.append(f"{name} lower bound must be >= {minimum}")

        if self.sweep.jobs < 1:
            errors.append("jobs must be >= 1")

        if self.sweep.on_guard not in GUARD_POLICIES:
            errors.append(f"on_guard must be one of: {list(GUARD_POLICIES)}")

        if self.output.format not in OUTPUT_FORMATS:
            errors.append(f"output format must be one of: {list(OUTPUT_FORMATS)}")

        return errors


class ConfigManager:
    """Configuration manager for mersenne-divisibility."""

    DEFAULT_CONFIG_FILES = [
        'mersenne-div.config.json',
        'mersenne-div.config.toml',
        '.mersenne-div.json',
        '.mersenne-div.toml',
        'pyproject.toml',  # Look for [tool.mersenne-div] section
    ]

    def __init__(self, config_path: Optional[Path] = None):
        """Initialize configuration manager."""
        self.config_path = config_path
        self.config = Configuration()

    def load_config(self, config_path: Optional[Path] = None) -> Configuration:
        """Load configuration from file."""
        if config_path:
            self.config_path = config_path

        if not self.config_path:
            self.config_path = self._find_config_file()

        if not self.config_path or not self.config_path.exists():
            logger.info("No configuration file found, using defaults")
            return self.config

        try:
            config_data = self._read_config_file(self.config_path)
            self.config = Configuration.from_dict(config_data)

            errors = self.config.validate()
            if errors:
                logger.warning(f"Configuration validation errors: {errors}")

            logger.info(f"Loaded configuration from: {self.config_path}")
            return self.config

        except Exception as e:
            logger.error(f"Failed to load configuration from {self.config_path}: {e}")
            logger.info("Using default configuration")
            self.config = Configuration()
            return self.config

    def save_config(self, config_path: Optional[Path] = None) -> None:
        """Save current configuration to file."""
        if config_path:
            self.config_path = config_path

        if not self.config_path:
            self.config_path = Path('mersenne-div.config.json')

        try:
            config_data = self.config.to_dict()

            if self.config_path.suffix.lower() == '.toml':
                with open(self.config_path, 'w', encoding='utf-8') as f:
                    toml.dump(config_data, f)
            else:
                with open(self.config_path, 'w', encoding='utf-8') as f:
                    json.dump(config_data, f, indent=2)

            logger.info(f"Saved configuration to: {self.config_path}")

        except Exception as e:
            logger.error(f"Failed to save configuration to {self.config_path}: {e}")
            raise

    def create_default_config(self, config_path: Optional[Path] = None) -> None:
        """Create a default configuration file."""
        self.config_path = config_path or Path('mersenne-div.config.json')
        self.config = Configuration()
        self.save_config()
        logger.info(f"Created default configuration file: {self.config_path}")

    def update_from_args(self, args: Dict[str, Any]) -> None:
        """Update configuration from command-line arguments (``None`` means unset)."""
        if args.get('max_bits') is not None:
            self.config.guard.max_bits = args['max_bits']

        if args.get('max_degree') is not None:
            self.config.guard.max_degree = args['max_degree']

        if args.get('seed') is not None:
            self.config.factor.seed = args['seed']

        if args.get('jobs') is not None:
            self.config.sweep.jobs = args['jobs']

        if args.get('include_poly') is not None:
            self.config.sweep.include_poly = args['include_poly']

        if args.get('on_guard') is not None:
            self.config.sweep.on_guard = args['on_guard']

        for key in ('a_range', 'm_range', 'k_range', 'd_range'):
            if args.get(key) is not None:
                setattr(self.config.sweep, key, list(args[key]))

        if args.get('format') is not None:
            self.config.output.format = args['format']

        if args.get('timing') is not None:
            self.config.output.timing = args['timing']

    def _find_config_file(self) -> Optional[Path]:
        """Find configuration file in current directory or parent directories."""
        current_dir = Path.cwd()

        while current_dir != current_dir.parent:
            for config_file in self.DEFAULT_CONFIG_FILES:
                config_path = current_dir / config_file
                if config_path.exists():
                    if config_file == 'pyproject.toml' and not self._has_tool_section(config_path):
                        continue
                    return config_path

            current_dir = current_dir.parent

        return None

    @staticmethod
    def _has_tool_section(pyproject: Path) -> bool:
        try:
            data = toml.load(pyproject)
        except Exception:
            return False
        return 'mersenne-div' in data.get('tool', {})

    def _read_config_file(self, config_path: Path) -> Dict[str, Any]:
        """Read configuration from file."""
        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {config_path}")

        suffix = config_path.suffix.lower()

        if suffix == '.json':
            with open(config_path, 'r', encoding='utf-8') as f:
                return json.load(f)

        elif suffix == '.toml':
            with open(config_path, 'r', encoding='utf-8') as f:
                data = toml.load(f)
                if config_path.name == 'pyproject.toml':
                    return data.get('tool', {}).get('mersenne-div', {})
                return data

        else:
            raise ValueError(f"Unsupported configuration file format: {suffix}")

    def get_config(self) -> Configuration:
        """Get current configuration."""
        return self.config


def create_default_config_manager(config_path: Optional[Path] = None) -> ConfigManager:
    """Create a default configuration manager."""
    return ConfigManager(config_path)
