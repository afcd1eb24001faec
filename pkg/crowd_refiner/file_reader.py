"""
File reader module for UTF-8 text inputs.

Configuration files and annotation documents are both read through
``FileReader``: configs line by line (so errors can name the line),
annotation documents as one string for the JSON decoder.

Example:
    >>> reader = FileReader("train.cfg")
    >>> lines = reader.read()
"""

import os
from typing import List


class FileReader:
    """Reads one text file.

    Attributes:
        source_file (str): Path of the file to read.
    """

    def __init__(self, source_file: str) -> None:
        self.source_file = source_file

    def _check_exists(self) -> None:
        if not os.path.exists(self.source_file):
            raise FileNotFoundError(f"Source file not found: {self.source_file}")

    def read(self) -> List[str]:
        """Return the file's lines, newline characters included.

        Raises:
            FileNotFoundError: If the file does not exist.
            UnicodeDecodeError: If the content is not valid UTF-8.
        """
        self._check_exists()
        with open(self.source_file, 'r', encoding='utf-8') as f:
            return f.readlines()

    def read_text(self) -> str:
        """Return the whole file as one string."""
        self._check_exists()
        with open(self.source_file, 'r', encoding='utf-8') as f:
            return f.read()
