"""
File operations coordinator for command artifacts.

This module gathers every file a command reads or writes outside the
checkpoint format: datasets, evaluation and ablation reports (JSON plus a
text table), predicted density maps (full-precision CSV plus an 8-bit heat
rendering), glimpse traces and region-of-interest masks.

Example:
    >>> files = FileOperationsCoordinator("runs/eval")
    >>> files.write_report(report.to_dict(), report.to_table(), "report")
    ('runs/eval/report.json', 'runs/eval/report.txt')
"""

import logging
import os
from typing import Any, Dict, List, Tuple

import numpy as np

from ..data.dataset import Dataset, to_channels
from ..data.pnm import read_pnm, render_heat, write_pnm
from ..json_writer import JSONWriter
from ..path_manager import PathManager
from ..stn import AffineTransform
from ..validators.base.error_handler import ErrorFormatter, ValidationError

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()


class FileOperationsCoordinator:
    """Coordinates file system operations of one command.

    Attributes:
        path_manager (PathManager): Paths below the output directory.
        output_dir (str): Normalized output directory.
    """

    def __init__(self, output_dir: str) -> None:
        self.path_manager = PathManager(output_dir)
        self.output_dir = self.path_manager.base_dir

    def load_dataset(self, path: str, channels: int = 1) -> Dataset:
        """Load a dataset directory or annotation document.

        Raises:
            FileNotFoundError: If ``path`` does not exist.
        """
        path = self.path_manager.normalize_path(path)
        if not self.path_manager.validate_path(path):
            raise FileNotFoundError(f"Dataset not found: {path}")
        return Dataset.load(path, channels)

    def write_dataset(self, dataset: Dataset) -> str:
        """Write images and ``annotations.json`` into the output directory."""
        document = dataset.save(self.output_dir)
        logger.info("wrote %d image(s) and %s", len(dataset), document)
        return document

    def write_report(self, data: Dict[str, Any], table: str, stem: str) -> Tuple[str, str]:
        """Write a report as ``<stem>.json`` and ``<stem>.txt``.

        Returns:
            Tuple[str, str]: Paths of the JSON and text files.
        """
        json_path = self.path_manager.join_paths(f"{stem}.json")
        text_path = self.path_manager.sibling_path(json_path, '.txt')
        JSONWriter(json_path).write(data)
        with open(text_path, 'w', encoding='utf-8') as f:
            f.write(table + '\n')
        return json_path, text_path

    def write_density(self, values: np.ndarray, stem: str) -> Tuple[str, str]:
        """Write a density map as ``<stem>.csv`` and a ``<stem>.pgm`` heat map.

        The CSV keeps every value at round-trip precision; the heat map is
        scaled by the map's maximum and only meant for looking at.
        """
        csv_path = self.path_manager.join_paths(f"{stem}.csv")
        pgm_path = self.path_manager.sibling_path(csv_path, '.pgm')
        self.path_manager.ensure_directory(csv_path)
        np.savetxt(csv_path, np.asarray(values, dtype=np.float64), fmt='%.17g', delimiter=',')
        write_pnm(pgm_path, render_heat(values))
        return csv_path, pgm_path

    def write_trace(self, trace: List[AffineTransform], stem: str) -> str:
        """Write the glimpse of every refinement iteration as JSON."""
        path = self.path_manager.join_paths(f"{stem}.json")
        JSONWriter(path).write([{'iteration': i + 1, **t.to_dict()} for i, t in enumerate(trace)])
        return path

    def read_roi(self, path: str) -> np.ndarray:
        """Read a mask image; nonzero pixels are inside the region.

        Raises:
            FileNotFoundError: If ``path`` does not exist.
            ValidationError: If the mask is not grayscale.
        """
        if not self.path_manager.validate_path(path):
            raise FileNotFoundError(f"ROI mask not found: {path}")
        mask = read_pnm(path)
        if mask.ndim != 2:
            raise ValidationError(_formatter.format_invalid_value_error(path, "roi", "mask must be a grayscale PGM"))
        return (mask > 0).astype(np.float64)

    def read_image(self, path: str, channels: int = 1) -> np.ndarray:
        """Read one input image for prediction."""
        if not self.path_manager.validate_path(path):
            raise FileNotFoundError(f"Image not found: {path}")
        return to_channels(read_pnm(path), channels)

    def stem_for(self, path: str) -> str:
        return os.path.splitext(os.path.basename(path))[0]
