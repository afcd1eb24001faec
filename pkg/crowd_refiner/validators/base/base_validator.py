"""
Validation strategy interface shared by the annotation, config and
checkpoint-inventory validators.

A strategy never raises to its caller: ``validate`` returns ``(True, None)``
or ``(False, error)``. Inside a strategy the ``_check_*`` helpers raise
``ValidationError`` so a sequence of checks reads top to bottom and is
wrapped in a single ``try``.

Example:
    >>> class SigmaValidator(ValidationStrategy):
    ...     def validate(self, data):
    ...         try:
    ...             self._check_type(data, (int, float), "sigma")
    ...             self._check_positive(data, "sigma")
    ...             return True, None
    ...         except ValidationError as e:
    ...             return False, e
    >>> SigmaValidator().validate(0.0)[1].message
    "Invalid value '0.0' in sigma: must be > 0"
"""

import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

from .error_handler import ErrorFormatter, ValidationError


class ValidationStrategy(ABC):
    """Base class of every validator.

    Attributes:
        error_formatter (ErrorFormatter): Builds the messages of raised errors
    """

    def __init__(self):
        self.error_formatter = ErrorFormatter()

    @abstractmethod
    def validate(self, data: Any) -> Tuple[bool, Optional[ValidationError]]:
        """Validate ``data``.

        Returns:
            Tuple[bool, Optional[ValidationError]]: Whether the data passed,
                and the first failure found when it did not.
        """

    def _check_type(self, value: Any, expected_type: Any, context: str) -> None:
        """Require ``isinstance(value, expected_type)``.

        ``bool`` is rejected where a number is expected; decoded JSON ``true``
        would otherwise count as the integer 1.

        Raises:
            ValidationError: If the value has another type.
        """
        is_bool = isinstance(value, bool) and expected_type is not bool
        if is_bool or not isinstance(value, expected_type):
            expected = expected_type if isinstance(expected_type, type) else expected_type[0]
            raise ValidationError(self.error_formatter.format_type_error(value, expected, context))

    def _check_not_empty(self, value: Any, context: str) -> None:
        if not value:
            raise ValidationError(self.error_formatter.format_empty_error(context))

    def _check_field_exists(self, data: Dict[str, Any], field: str, context: str) -> None:
        if field not in data:
            raise ValidationError(self.error_formatter.format_missing_field_error(field, context))

    def _check_positive(self, value: float, context: str) -> None:
        if not value > 0:
            raise ValidationError(self.error_formatter.format_invalid_value_error(value, context, "must be > 0"))

    def _check_finite(self, value: float, context: str) -> None:
        if not math.isfinite(value):
            raise ValidationError(self.error_formatter.format_invalid_value_error(value, context, "must be finite"))

    def _check_shape(self, name: str, shape: Tuple[int, ...], expected: Tuple[int, ...], context: str) -> None:
        """Require an array's extents to equal ``expected``.

        Raises:
            ValidationError: Naming the array and both shapes.
        """
        if tuple(shape) != tuple(expected):
            raise ValidationError(self.error_formatter.format_invalid_value_error(
                name, context, f"shape {tuple(shape)} differs from expected {tuple(expected)}"
            ))
