"""
Annotation validators for point-annotation documents.

The schema validator checks the shape of one document entry
(``{"image": str, "width": int, "height": int, "points": [[x, y], ...]}``);
the content validator checks that every point of a parsed annotation lies
inside its image.

Example:
    >>> validator = AnnotationSchemaValidator()
    >>> entry = {"image": "a.pgm", "width": 64, "height": 64, "points": [[3, 4.5]]}
    >>> validator.validate([entry])
    (True, None)
"""

from typing import Any, Optional, Tuple

from .base.base_validator import ValidationStrategy
from .base.error_handler import ValidationError


class AnnotationSchemaValidator(ValidationStrategy):
    """Validates the JSON structure of an annotation document.

    Attributes:
        required_fields (Tuple[str, ...]): Keys every entry must carry.
    """

    def __init__(self):
        super().__init__()
        self.required_fields: Tuple[str, ...] = ('image', 'width', 'height', 'points')

    def validate(self, data: Any) -> Tuple[bool, Optional[ValidationError]]:
        """Validate a whole document: a list of entries."""
        try:
            self._check_type(data, list, "Annotation document")
        except ValidationError as e:
            return False, e
        for index, entry in enumerate(data):
            valid, error = self.validate_entry(entry, f"entry {index}")
            if not valid:
                return False, error
        return True, None

    def validate_entry(self, entry: Any, context: str) -> Tuple[bool, Optional[ValidationError]]:
        """Validate one document entry.

        Args:
            entry (Any): Decoded JSON value of the entry.
            context (str): Description used in error messages.

        Returns:
            Tuple[bool, Optional[ValidationError]]: Validity and error details.
        """
        try:
            self._check_type(entry, dict, context)
            for field in self.required_fields:
                self._check_field_exists(entry, field, context)
            self._check_type(entry['image'], str, f"image in {context}")
            self._check_not_empty(entry['image'], f"image in {context}")
            for field in ('width', 'height'):
                self._check_type(entry[field], int, f"{field} in {context}")
                self._check_positive(entry[field], f"{field} in {context}")
            self._check_type(entry['points'], list, f"points in {context}")
            for i, point in enumerate(entry['points']):
                self._check_point(point, f"point {i} in {context}")
        except ValidationError as e:
            return False, e
        return True, None

    def _check_point(self, point: Any, context: str) -> None:
        self._check_type(point, list, context)
        if len(point) != 2:
            raise ValidationError(
                self.error_formatter.format_invalid_value_error(point, context, "expected [x, y]")
            )
        for value in point:
            self._check_type(value, (int, float), context)
            self._check_finite(value, context)


class AnnotationContentValidator(ValidationStrategy):
    """Checks that every point of an annotation lies inside its image.

    Accepts any object with ``image_id``, ``points``, ``width`` and
    ``height`` attributes.
    """

    def validate(self, data: Any) -> Tuple[bool, Optional[ValidationError]]:
        for x, y in data.points:
            if not (0.0 <= x < data.width and 0.0 <= y < data.height):
                return False, ValidationError(
                    self.error_formatter.format_out_of_bounds_error((x, y), data.width, data.height, data.image_id)
                )
        return True, None
