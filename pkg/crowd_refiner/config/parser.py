"""
Run configuration from ``key = value`` files and command-line overrides.

A config file holds one ``key = value`` pair per line; ``#`` starts a
comment and blank lines are ignored. Values from flags override file
values, which override the defaults. The merged values are split into the
typed ``ModelConfig``, ``TrainConfig`` and ``SceneConfig`` objects.

Example:
    >>> cfg = load_run_config("train.cfg", {"n": 4})
    >>> cfg.train_config().n
    4
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..data.synthetic import SceneConfig
from ..file_reader import FileReader
from ..model.params import ModelConfig
from ..stn.transform import TransformMode
from ..tensor_core import set_default_dtype
from ..training.trainer import TrainConfig
from ..validators.base.error_handler import ConfigError, CrowdRefinerError, ErrorFormatter
from ..validators.config_validator import ConfigValidator

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

THREADS_ENV = 'DRSAN_THREADS'

_TRUE = {'on', 'true', 'yes', '1'}
_FALSE = {'off', 'false', 'no', '0'}


def parse_bool(value: str) -> bool:
    key = str(value).strip().lower()
    if key in _TRUE:
        return True
    if key in _FALSE:
        return False
    raise ValueError("expected on/off, true/false, yes/no or 1/0")


def parse_mode(value: str) -> TransformMode:
    try:
        return TransformMode.parse(str(value))
    except CrowdRefinerError as e:
        raise ValueError(e.message) from None


def parse_dtype(value: str) -> str:
    if value not in ('float64', 'float32'):
        raise ValueError("expected float64 or float32")
    return value


def parse_pool(value: str) -> str:
    if value not in ('avg', 'flatten'):
        raise ValueError("expected avg or flatten")
    return value


CONVERTERS: Dict[str, Callable[[str], Any]] = {
    # run
    'seed': int, 'n': int, 'mode': parse_mode, 'context': parse_bool, 'iters': int,
    'dtype': parse_dtype, 'data': str, 'num_images': int,
    # optimization
    'lr0': float, 'decay': float, 'decay_every': int, 'beta1': float, 'beta2': float, 'eps': float,
    'sigma': float, 'init_std': float, 'log_every': int, 'checkpoint_every': int, 'clip_norm': float,
    'augment': parse_bool, 'crop_min': float, 'crop_max': float,
    # network
    'region_h': int, 'region_w': int, 'image_h': int, 'image_w': int, 'channels': int,
    'width': float, 'hidden': int, 's_min': float, 'context_pool': parse_pool,
    # synthetic scenes
    'count_min': int, 'count_max': int, 'radius_min': float, 'radius_max': float,
    'perspective': float, 'rotation': float, 'noise': float,
}

DEFAULTS: Dict[str, Any] = {
    'seed': 7, 'n': 30, 'mode': TransformMode.TSR, 'context': True, 'iters': 2000,
    'dtype': 'float64', 'data': None, 'num_images': 8,
    'lr0': 1e-4, 'decay': 0.98, 'decay_every': 1000, 'beta1': 0.9, 'beta2': 0.999, 'eps': 1e-8,
    'sigma': 4.0, 'init_std': 0.01, 'log_every': 100, 'checkpoint_every': 0, 'clip_norm': 0.0,
    'augment': False, 'crop_min': 0.5, 'crop_max': 0.9,
    'region_h': None, 'region_w': None, 'image_h': 64, 'image_w': 64, 'channels': 1,
    'width': 1.0, 'hidden': 512, 's_min': 0.2, 'context_pool': 'avg',
    'count_min': 5, 'count_max': 25, 'radius_min': 1.5, 'radius_max': 3.0,
    'perspective': 0.5, 'rotation': 30.0, 'noise': 0.05,
}


class ConfigFileParser:
    """Reads a ``key = value`` file into raw string entries.

    Attributes:
        path (str): Config file path.
        validator (ConfigValidator): Checks keys and value syntax.
    """

    def __init__(self, path: str):
        self.path = path
        self.validator = ConfigValidator(CONVERTERS)

    def parse(self) -> Dict[str, Any]:
        """Return converted values keyed by name.

        Raises:
            ConfigError: On a malformed line, an unknown key or a value that
                does not convert; the message names the line.
        """
        try:
            lines = FileReader(self.path).read()
        except FileNotFoundError as e:
            raise ConfigError(str(e)) from None
        values: Dict[str, Any] = {}
        for number, line in enumerate(lines, start=1):
            text = line.split('#', 1)[0].strip()
            if not text:
                continue
            if '=' not in text:
                raise ConfigError(f"{self.path}:{number}: expected 'key = value', got '{text}'")
            key, raw = (part.strip() for part in text.split('=', 1))
            valid, error = self.validator.validate({key: raw})
            if not valid:
                raise ConfigError(f"{self.path}:{number}: {error.message}")
            values[key] = CONVERTERS[key](raw)
        return values


@dataclass
class RunConfig:
    """Merged configuration of one command.

    Attributes:
        values (Dict[str, Any]): Converted value for every known key.
        source (Optional[str]): Config file the values came from, if any.
    """

    values: Dict[str, Any] = field(default_factory=lambda: dict(DEFAULTS))
    source: Optional[str] = None

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def override(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Return a copy with ``overrides`` applied; None values are skipped."""
        merged = dict(self.values)
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in CONVERTERS:
                raise ConfigError(_formatter.format_invalid_value_error(key, "config", "unknown key"))
            merged[key] = CONVERTERS[key](value) if isinstance(value, str) else value
        return RunConfig(merged, self.source)

    def model_config(self, **changes) -> ModelConfig:
        v = {**self.values, **changes}
        return ModelConfig(
            image_h=v['image_h'], image_w=v['image_w'], channels=v['channels'], width=v['width'],
            hidden=v['hidden'], region_h=v['region_h'], region_w=v['region_w'], mode=v['mode'],
            context=v['context'], context_pool=v['context_pool'], s_min=v['s_min'],
        )

    def train_config(self, **changes) -> TrainConfig:
        v = {**self.values, **changes}
        return TrainConfig(
            lr0=v['lr0'], decay=v['decay'], decay_every=v['decay_every'], beta1=v['beta1'],
            beta2=v['beta2'], eps=v['eps'], iterations=v['iters'], n=v['n'], seed=v['seed'],
            sigma=v['sigma'], init_std=v['init_std'], log_every=v['log_every'],
            checkpoint_every=v['checkpoint_every'], clip_norm=v['clip_norm'], augment=v['augment'],
            crop_min=v['crop_min'], crop_max=v['crop_max'], data=v['data'],
        )

    def scene_config(self, **changes) -> SceneConfig:
        v = {**self.values, **changes}
        return SceneConfig(
            height=v['image_h'], width=v['image_w'], count_min=v['count_min'], count_max=v['count_max'],
            radius_min=v['radius_min'], radius_max=v['radius_max'], perspective=v['perspective'],
            rotation=v['rotation'], noise=v['noise'], channels=v['channels'], seed=v['seed'],
        )

    def apply_dtype(self) -> None:
        set_default_dtype(self.values['dtype'])

    def describe(self) -> List[str]:
        return [f"{key} = {self.values[key]}" for key in sorted(self.values)]


def load_run_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Defaults, then the config file (if any), then the overrides."""
    cfg = RunConfig(dict(DEFAULTS), path)
    if path:
        cfg = cfg.override(ConfigFileParser(path).parse())
        logger.debug("read config %s", path)
    return cfg.override(overrides or {})


def worker_count(default: int = 1) -> int:
    """Worker cap from the ``DRSAN_THREADS`` environment variable.

    Raises:
        ConfigError: If the variable is set but not a positive integer.
    """
    raw = os.getenv(THREADS_ENV)
    if raw is None or not raw.strip():
        return default
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        raise ConfigError(_formatter.format_invalid_value_error(raw, THREADS_ENV, "must be a positive integer"))
    return count
