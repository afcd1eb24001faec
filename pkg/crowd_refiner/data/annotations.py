"""
Reading and writing point-annotation documents.

A document is one JSON list of entries
``{"image": path, "width": int, "height": int, "points": [[x, y], ...]}``
with pixel coordinates, origin top-left. Image paths are relative to the
document. Syntax errors and schema violations are reported with the line
and column where the offending text (or entry) starts.

Example:
    >>> save_annotations("data/annotations.json", [Annotation("images/a.pgm", [(1.0, 2.0)], 8, 8)])
    >>> load_annotations("data/annotations.json")[0].points
    [(1.0, 2.0)]
"""

import json
import logging
from typing import List, Tuple

from ..density import Annotation
from ..file_reader import FileReader
from ..json_writer import JSONWriter
from ..validators.annotation_validator import AnnotationContentValidator, AnnotationSchemaValidator
from ..validators.base.error_handler import AnnotationError, AnnotationParseError

logger = logging.getLogger(__name__)


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count('\n', 0, offset) + 1
    column = offset - (text.rfind('\n', 0, offset) + 1) + 1
    return line, column


def _skip_whitespace(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in ' \t\r\n':
        pos += 1
    return pos


def _entry_offsets(text: str) -> List[int]:
    """Start offsets of the top-level list's elements in well-formed JSON."""
    decoder = json.JSONDecoder()
    pos = _skip_whitespace(text, 0) + 1
    offsets: List[int] = []
    while True:
        pos = _skip_whitespace(text, pos)
        if pos >= len(text) or text[pos] == ']':
            return offsets
        offsets.append(pos)
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip_whitespace(text, pos)
        if pos < len(text) and text[pos] == ',':
            pos += 1


def parse_annotations(text: str, source: str = '<string>') -> List[Annotation]:
    """Parse and validate an annotation document held in memory.

    Args:
        text (str): Document text.
        source (str): Name used in error messages.

    Returns:
        List[Annotation]: One annotation per entry, in document order.

    Raises:
        AnnotationParseError: On malformed JSON or a schema violation; the
            error carries line and column.
        AnnotationError: If a point lies outside its image.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise AnnotationParseError(
            f"{source}:{e.lineno}:{e.colno}: {e.msg}", e.lineno, e.colno
        ) from None

    schema = AnnotationSchemaValidator()
    content = AnnotationContentValidator()
    if not isinstance(document, list):
        line, column = _position(text, _skip_whitespace(text, 0))
        raise AnnotationParseError(
            f"{source}:{line}:{column}: top-level value must be a list of entries", line, column
        )

    annotations: List[Annotation] = []
    for index, (entry, offset) in enumerate(zip(document, _entry_offsets(text))):
        valid, error = schema.validate_entry(entry, f"entry {index}")
        if not valid:
            line, column = _position(text, offset)
            raise AnnotationParseError(f"{source}:{line}:{column}: {error.message}", line, column)
        ann = Annotation(
            image_id=entry['image'],
            points=[(float(x), float(y)) for x, y in entry['points']],
            height=entry['height'],
            width=entry['width'],
        )
        valid, error = content.validate(ann)
        if not valid:
            raise AnnotationError(error.message)
        annotations.append(ann)
    logger.debug("parsed %d annotation(s) from %s", len(annotations), source)
    return annotations


def load_annotations(path: str) -> List[Annotation]:
    """Load and validate the annotation document at ``path``."""
    return parse_annotations(FileReader(path).read_text(), path)


def save_annotations(path: str, annotations: List[Annotation]) -> None:
    """Write annotations as a document that ``load_annotations`` reads back exactly."""
    JSONWriter(path).write([ann.to_dict() for ann in annotations])
