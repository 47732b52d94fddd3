import logging
from pathlib import Path
from typing import Dict, Any, Optional

from dotenv import dotenv_values

from src.models.error_model import ConfigError

DEFAULTS = {
    'LOG_LEVEL': 'INFO',
    'MAX_BOX_VERTICES': '250000',
    'MAX_SCAN_ENTRY_BOUND': '25',
    'DEFAULT_CHECK_HEIGHT': '1000',
    'RIVER_STEP_LIMIT': '1000000',
    'INT_WIDTH': '0',
    'SCAN_WORKERS': '1',
    'EXPORT_P_BOUND': '5',
    'EXPORT_Q_BOUND': '5',
    'SVG_SIZE': '800',
    'SVG_PRECISION': '3',
}


class Config:
    """Built-in defaults, optionally overridden by a KEY=VALUE file.

    The file is parsed with dotenv_values, which never touches the process
    environment.
    """

    def __init__(self, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None):
        self._values = dict(DEFAULTS)
        if config_file:
            self._values.update(self._load_file(config_file))
        if overrides:
            self._values.update({key: str(value) for key, value in overrides.items()})

        self.LOG_LEVEL = self._get('LOG_LEVEL').upper()
        self._setup_logging()

        self.MAX_BOX_VERTICES = self._get_int('MAX_BOX_VERTICES', minimum=1)
        self.MAX_SCAN_ENTRY_BOUND = self._get_int('MAX_SCAN_ENTRY_BOUND', minimum=1)
        self.DEFAULT_CHECK_HEIGHT = self._get_int('DEFAULT_CHECK_HEIGHT', minimum=1)
        self.RIVER_STEP_LIMIT = self._get_int('RIVER_STEP_LIMIT', minimum=1)
        self.INT_WIDTH = self._get_int('INT_WIDTH', minimum=0)
        self.SCAN_WORKERS = self._get_int('SCAN_WORKERS', minimum=1)
        self.EXPORT_P_BOUND = self._get_int('EXPORT_P_BOUND', minimum=1)
        self.EXPORT_Q_BOUND = self._get_int('EXPORT_Q_BOUND', minimum=1)
        self.SVG_SIZE = self._get_int('SVG_SIZE', minimum=16)
        self.SVG_PRECISION = self._get_int('SVG_PRECISION', minimum=0)

        if 0 < self.INT_WIDTH < 8:
            raise ConfigError(f"INT_WIDTH must be 0 or at least 8, got {self.INT_WIDTH}")
        if self.EXPORT_Q_BOUND % 2 == 0:
            raise ConfigError(f"EXPORT_Q_BOUND must be odd, got {self.EXPORT_Q_BOUND}")

        self.logger.debug(f"⚙️ Configuration loaded: {self!r}")

    def _load_file(self, config_file: str) -> Dict[str, str]:
        if not Path(config_file).is_file():
            raise ConfigError(f"Configuration file not found: {config_file}")
        values = dotenv_values(config_file)
        unknown = sorted(key for key in values if key not in DEFAULTS)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")
        return {key: value for key, value in values.items() if value is not None}

    def _setup_logging(self):
        level = getattr(logging, self.LOG_LEVEL, None)
        if not isinstance(level, int):
            raise ConfigError(f"Unknown LOG_LEVEL: {self.LOG_LEVEL}")
        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.StreamHandler(),
            ]
        )
        logging.getLogger().setLevel(level)
        self.logger = logging.getLogger('Config')

    def _get(self, key: str) -> str:
        return str(self._values.get(key, DEFAULTS[key])).strip()

    def _get_int(self, key: str, minimum: int) -> int:
        raw = self._get(key)
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}")
        if value < minimum:
            raise ConfigError(f"{key} must be at least {minimum}, got {value}")
        return value

    def get_limits_config(self) -> Dict[str, Any]:
        return {
            'max_box_vertices': self.MAX_BOX_VERTICES,
            'max_scan_entry_bound': self.MAX_SCAN_ENTRY_BOUND,
            'default_check_height': self.DEFAULT_CHECK_HEIGHT,
            'river_step_limit': self.RIVER_STEP_LIMIT,
            'int_width': self.INT_WIDTH,
            'scan_workers': self.SCAN_WORKERS
        }

    def get_render_config(self) -> Dict[str, Any]:
        return {
            'export_p_bound': self.EXPORT_P_BOUND,
            'export_q_bound': self.EXPORT_Q_BOUND,
            'svg_size': self.SVG_SIZE,
            'svg_precision': self.SVG_PRECISION
        }

    def is_checked_backend(self) -> bool:
        return self.INT_WIDTH > 0

    def __repr__(self) -> str:
        return (f"Config(log_level={self.LOG_LEVEL}, "
                f"int_width={self.INT_WIDTH}, "
                f"max_box_vertices={self.MAX_BOX_VERTICES})")
