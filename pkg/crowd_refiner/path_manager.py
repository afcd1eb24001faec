"""
Path manager module for dataset and run directories.

This module centralizes where the pipeline reads and writes files: the
layout of a generated dataset (``annotations.json`` next to an ``images/``
folder), the artifacts of a training run, and resolution of image paths
that annotation documents store relative to themselves.

Example:
    >>> manager = PathManager("runs/exp1")
    >>> manager.checkpoint_path()
    'runs/exp1/model.drsn'
    >>> manager.image_path(3)
    'runs/exp1/images/img_0003.pgm'
"""

import os
from typing import Optional

ANNOTATION_FILE = 'annotations.json'
IMAGE_DIR = 'images'
CHECKPOINT_FILE = 'model.drsn'
METRICS_FILE = 'metrics.log'


class PathManager:
    """Builds and normalizes paths below one base directory.

    Attributes:
        base_dir (str): Root of a dataset or run directory.
    """

    def __init__(self, base_dir: Optional[str] = None) -> None:
        self.base_dir = os.path.normpath(base_dir) if base_dir else os.getcwd()

    def normalize_path(self, path: str) -> str:
        return os.path.normpath(path)

    def join_paths(self, *paths: str) -> str:
        return os.path.join(self.base_dir, *paths)

    def ensure_directory(self, path: str) -> None:
        """Create the parent directory of ``path`` if it does not exist."""
        directory = os.path.dirname(path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory, exist_ok=True)

    def validate_path(self, path: str) -> bool:
        return os.path.exists(path)

    def sibling_path(self, source_file: str, extension: str) -> str:
        """Path next to ``source_file`` with the same stem and a new extension.

        Example:
            >>> PathManager().sibling_path("maps/img_0001.pgm", ".csv")
            'maps/img_0001.csv'
        """
        source_dir = os.path.dirname(source_file)
        stem = os.path.splitext(os.path.basename(source_file))[0]
        return os.path.join(source_dir, f"{stem}{extension}")

    # ----------------------------------------------------------- dataset
    def annotation_path(self) -> str:
        return self.join_paths(ANNOTATION_FILE)

    def image_path(self, index: int, extension: str = '.pgm') -> str:
        return self.join_paths(IMAGE_DIR, f"img_{index:04d}{extension}")

    def relative_image_path(self, index: int, extension: str = '.pgm') -> str:
        """Image path as stored inside the annotation document."""
        return f"{IMAGE_DIR}/img_{index:04d}{extension}"

    def resolve(self, document_path: str, image: str) -> str:
        """Resolve an image reference relative to the document that names it."""
        if os.path.isabs(image):
            return image
        return os.path.normpath(os.path.join(os.path.dirname(document_path), image))

    # --------------------------------------------------------------- run
    def checkpoint_path(self, iteration: Optional[int] = None) -> str:
        if iteration is None:
            return self.join_paths(CHECKPOINT_FILE)
        return self.join_paths(f"model_{iteration:06d}.drsn")

    def metrics_path(self) -> str:
        return self.join_paths(METRICS_FILE)
