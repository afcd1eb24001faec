"""
JSON writer module for report, trace and annotation output.

This module writes JSON documents with consistent formatting, creating the
target directory when needed. NumPy scalars and arrays produced by the
numeric code are converted to plain Python values on the way out, so
callers can hand over reports without cleaning them first.

Example:
    >>> writer = JSONWriter("runs/eval/report.json")
    >>> writer.write({"mae": np.float64(1.5), "counts": np.arange(3)})
"""

import json
import os
from typing import Any

import numpy as np


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class JSONWriter:
    """Writes one JSON document to a fixed path.

    Attributes:
        output_path (str): Path where the JSON file will be written.
    """

    def __init__(self, output_path: str) -> None:
        self.output_path = output_path

    def write(self, data: Any) -> None:
        """Write ``data`` as JSON with 2-space indentation and UTF-8 encoding.

        Args:
            data (Any): JSON-serializable value; NumPy values are converted.

        Raises:
            OSError: If the directory or file cannot be written.
            TypeError: If data holds values that cannot be serialized.
        """
        if os.path.dirname(self.output_path):
            os.makedirs(os.path.dirname(self.output_path), exist_ok=True)
        with open(self.output_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, default=_to_builtin)
            f.write('\n')
