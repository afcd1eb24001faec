"""
Error handling module for consistent error management across the package.

This module defines the exception hierarchy raised by every part of the
crowd counting pipeline, together with the message formatter used to keep
error text uniform. Each exception keeps its message on ``.message`` so the
command line layer can report it without inspecting the type.

Example:
    >>> formatter = ErrorFormatter()
    >>> try:
    ...     raise DimensionError(
    ...         formatter.format_dimension_error("conv2d", "channels", 3, 2)
    ...     )
    ... except DimensionError as e:
    ...     print(e)
    conv2d: axis 'channels' has extent 3, expected 2
"""

from typing import Any, Optional


class CrowdRefinerError(Exception):
    """Base class for every error raised by this package.

    Attributes:
        message (str): Detailed error message explaining the failure
    """

    def __init__(self, message: str):
        """
        Initialize the error.

        Args:
            message (str): Error message
        """
        self.message = message
        super().__init__(self.message)


class ValidationError(CrowdRefinerError):
    """Raised by validators when data fails a validation strategy."""


class DimensionError(CrowdRefinerError):
    """Raised when tensor or map extents do not agree.

    The message always names the offending axis.
    """


class ContractError(CrowdRefinerError):
    """Raised when an operation is called outside its precondition."""


class SingularTransformError(CrowdRefinerError):
    """Raised when an affine transform cannot be inverted.

    Attributes:
        det (float): Determinant of the linear part that triggered the error
    """

    def __init__(self, message: str, det: float):
        self.det = det
        super().__init__(message)


class AnnotationError(CrowdRefinerError):
    """Raised when an annotation point lies outside its image."""


class AnnotationParseError(CrowdRefinerError):
    """Raised when an annotation document is malformed.

    Attributes:
        line (Optional[int]): 1-based line of the failure when known
        column (Optional[int]): 1-based column of the failure when known
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        super().__init__(message)


class DivergenceError(CrowdRefinerError):
    """Raised when training produces a non-finite loss or gradient.

    Attributes:
        iteration (Optional[int]): Training iteration of a non-finite loss
        parameter (Optional[str]): Parameter holding a non-finite gradient
    """

    def __init__(self, message: str, iteration: Optional[int] = None, parameter: Optional[str] = None):
        self.iteration = iteration
        self.parameter = parameter
        super().__init__(message)


class ConfigError(CrowdRefinerError):
    """Raised for unknown configuration keys or invalid values."""


class CheckpointError(CrowdRefinerError):
    """Base class for checkpoint persistence failures."""


class CheckpointCorruptionError(CheckpointError):
    """Raised when the trailing CRC32 does not match the payload."""


class CheckpointInventoryError(CheckpointError):
    """Raised when checkpoint arrays differ from the parameter inventory."""


class CheckpointVersionError(CheckpointError):
    """Raised when a checkpoint was written by another format version."""


class ErrorFormatter:
    """Utility class for formatting error messages.

    Each method focuses on one kind of failure and produces a message that
    is consistent in structure and names the thing that went wrong.
    """

    def format_type_error(self, value: Any, expected_type: type, context: str) -> str:
        """Format error message for type validation failures.

        Args:
            value (Any): The value that failed type validation.
            expected_type (type): The type that was expected.
            context (str): Description of where the error occurred.

        Returns:
            str: A formatted error message describing the type mismatch.

        Example:
            >>> ErrorFormatter().format_type_error(42, str, "image")
            'image must be a str, got int instead'
        """
        return (
            f"{context} must be a {expected_type.__name__}, "
            f"got {type(value).__name__} instead"
        )

    def format_empty_error(self, context: str) -> str:
        """Format error message for empty value validation failures."""
        return f"{context} cannot be empty"

    def format_missing_field_error(self, field: str, context: str) -> str:
        """Format error message for missing required fields.

        Example:
            >>> ErrorFormatter().format_missing_field_error("points", "entry 0")
            "Missing required field 'points' in entry 0"
        """
        return f"Missing required field '{field}' in {context}"

    def format_invalid_value_error(self, value: Any, context: str, reason: str) -> str:
        """Format error message for invalid value validation failures.

        Args:
            value (Any): The invalid value.
            context (str): Description of the value's context.
            reason (str): Explanation of why the value is invalid.

        Returns:
            str: A formatted error message about the invalid value.
        """
        return f"Invalid value '{value}' in {context}: {reason}"

    def format_dimension_error(self, operation: str, axis: str, actual: int, expected: Any) -> str:
        """Format error message for mismatched extents.

        Args:
            operation (str): Name of the operation that rejected its input.
            axis (str): Name of the offending axis.
            actual (int): Extent that was received.
            expected (Any): Extent or rule that was required.

        Returns:
            str: A formatted error message naming the axis.
        """
        return f"{operation}: axis '{axis}' has extent {actual}, expected {expected}"

    def format_out_of_bounds_error(self, point: Any, width: int, height: int, context: str) -> str:
        """Format error message for a point outside its image.

        Example:
            >>> ErrorFormatter().format_out_of_bounds_error((70.0, 3.0), 64, 64, "img_1")
            'Point (70.0, 3.0) in img_1 lies outside [0, 64) x [0, 64)'
        """
        return f"Point {tuple(point)} in {context} lies outside [0, {width}) x [0, {height})"

    def format_structure_error(self, context: str, details: str) -> str:
        """Format error message for structural validation failures."""
        return f"Invalid structure in {context}: {details}"
