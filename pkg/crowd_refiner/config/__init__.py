"""
Configuration package: config files, flag overrides and the worker cap.

Components:
    - parser: ConfigFileParser, RunConfig, load_run_config, worker_count
"""

from .parser import (
    ConfigFileParser,
    RunConfig,
    load_run_config,
    worker_count,
    parse_bool,
    CONVERTERS,
    DEFAULTS,
    THREADS_ENV,
)

__all__ = [
    'ConfigFileParser',
    'RunConfig',
    'load_run_config',
    'worker_count',
    'parse_bool',
    'CONVERTERS',
    'DEFAULTS',
    'THREADS_ENV',
]
