"""
Config validator for ``key = value`` run configurations.

Each known key has a converter; validation checks that every key is known
and that its raw text converts. Range checks belong to the typed config
objects built afterwards.

Example:
    >>> validator = ConfigValidator({"seed": int})
    >>> validator.validate({"seed": "7"})
    (True, None)
    >>> validator.validate({"sede": "7"})[1].message
    "Invalid value 'sede' in config: unknown key"
"""

from typing import Any, Callable, Dict, Optional, Tuple

from .base.base_validator import ValidationStrategy
from .base.error_handler import ValidationError


class ConfigValidator(ValidationStrategy):
    """Checks config entries against the known keys and their converters.

    Attributes:
        converters (Dict[str, Callable[[str], Any]]): Converter per key.
    """

    def __init__(self, converters: Dict[str, Callable[[str], Any]]):
        super().__init__()
        self.converters = converters

    def validate(self, data: Dict[str, Any]) -> Tuple[bool, Optional[ValidationError]]:
        for key, raw in data.items():
            if key not in self.converters:
                return False, ValidationError(
                    self.error_formatter.format_invalid_value_error(key, "config", "unknown key")
                )
            if not isinstance(raw, str):
                continue
            try:
                self.converters[key](raw)
            except (ValueError, TypeError) as e:
                return False, ValidationError(self.error_formatter.format_invalid_value_error(raw, key, str(e)))
        return True, None
