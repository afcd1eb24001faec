"""
Validator package for inputs that cross the package boundary.

Every validator implements the ``ValidationStrategy`` protocol and returns
``(is_valid, error)`` instead of raising, so callers decide which domain
error to raise and how much position information to attach.

Components:
    - AnnotationSchemaValidator: structure of annotation documents
    - AnnotationContentValidator: points inside their image
    - ConfigValidator: known config keys and value syntax
    - InventoryValidator: checkpoint arrays against the parameter inventory

Example:
    >>> valid, error = AnnotationSchemaValidator().validate([{"image": "a.pgm"}])
    >>> error.message
    "Missing required field 'width' in entry 0"
"""

from .annotation_validator import AnnotationSchemaValidator, AnnotationContentValidator
from .config_validator import ConfigValidator
from .inventory_validator import InventoryValidator

__all__ = [
    'AnnotationSchemaValidator',
    'AnnotationContentValidator',
    'ConfigValidator',
    'InventoryValidator',
]
