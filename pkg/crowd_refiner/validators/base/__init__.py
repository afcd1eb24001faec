"""
Base validator package providing core validation functionality.

This package contains the base validation classes, the error hierarchy and
the message formatter used by all validators.
"""

from .base_validator import ValidationStrategy
from .error_handler import (
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
    'ValidationStrategy',
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
