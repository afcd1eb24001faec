"""
Inventory validator for stored parameter sets.

Checks that a mapping of array names to arrays (or shapes) matches an
expected inventory exactly: no missing name, no unknown name, equal shapes.

Example:
    >>> validator = InventoryValidator({"init.bias": (1,)})
    >>> validator.validate({"init.bias": (1,), "extra.weight": (2, 2)})[1].message
    "Invalid value 'extra.weight' in checkpoint: unknown array"
"""

from typing import Any, Dict, Optional, Tuple

from .base.base_validator import ValidationStrategy
from .base.error_handler import ValidationError


class InventoryValidator(ValidationStrategy):
    """Compares stored arrays with the expected names and shapes.

    Attributes:
        expected (Dict[str, Tuple[int, ...]]): Required name to shape mapping.
    """

    def __init__(self, expected: Dict[str, Tuple[int, ...]]):
        super().__init__()
        self.expected = expected

    def validate(self, data: Dict[str, Any]) -> Tuple[bool, Optional[ValidationError]]:
        for name in sorted(self.expected):
            if name not in data:
                return False, ValidationError(self.error_formatter.format_missing_field_error(name, "checkpoint"))
        for name in sorted(data):
            if name not in self.expected:
                return False, ValidationError(
                    self.error_formatter.format_invalid_value_error(name, "checkpoint", "unknown array")
                )
            value = data[name]
            shape = value.shape if hasattr(value, 'shape') else value
            try:
                self._check_shape(name, shape, self.expected[name], "checkpoint")
            except ValidationError as e:
                return False, e
        return True, None
