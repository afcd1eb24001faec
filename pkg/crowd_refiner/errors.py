"""
Errors module re-exporting the package's exception hierarchy.

This module provides a short import path to the error classes defined in
``validators.base.error_handler``.

Example:
    >>> from crowd_refiner.errors import DimensionError
"""

from .validators.base.error_handler import (
    CrowdRefinerError,
    ValidationError,
    DimensionError,
    ContractError,
    SingularTransformError,
    AnnotationError,
    AnnotationParseError,
    DivergenceError,
    ConfigError,
    CheckpointError,
    CheckpointCorruptionError,
    CheckpointInventoryError,
    CheckpointVersionError,
    ErrorFormatter,
)

__all__ = [
    'CrowdRefinerError',
    'ValidationError',
    'DimensionError',
    'ContractError',
    'SingularTransformError',
    'AnnotationError',
    'AnnotationParseError',
    'DivergenceError',
    'ConfigError',
    'CheckpointError',
    'CheckpointCorruptionError',
    'CheckpointInventoryError',
    'CheckpointVersionError',
    'ErrorFormatter',
]
