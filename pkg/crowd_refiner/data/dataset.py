"""
Image/annotation pairs ready for training and evaluation.

A dataset directory holds ``annotations.json`` and the images it names
(relative paths, binary PGM or PPM). ``Sample`` couples an image with its
annotation and produces the network input tensor and the ground-truth
density map at prediction resolution (1/8 of the image).

Example:
    >>> dataset = Dataset.load("data/synthetic")
    >>> sample = dataset[0]
    >>> sample.ground_truth(sigma=4.0).shape
    (8, 8)
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

import numpy as np

from ..density import DEFAULT_SIGMA, Annotation, downsample_sum, generate_density
from ..model.params import MAP_STRIDE
from ..path_manager import ANNOTATION_FILE, PathManager
from ..tensor_core import Tensor, get_default_dtype
from ..validators.base.error_handler import ContractError, DimensionError, ErrorFormatter
from .annotations import load_annotations, save_annotations
from .pnm import read_pnm, write_pnm

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()


def to_channels(image: np.ndarray, channels: int) -> np.ndarray:
    """Return ``image`` as (H, W) for one channel or (H, W, 3) for three."""
    if channels == 1:
        return image.mean(axis=2) if image.ndim == 3 else image
    return image if image.ndim == 3 else np.repeat(image[:, :, None], 3, axis=2)


@dataclass
class Sample:
    """One image and its annotation.

    Attributes:
        image (np.ndarray): Pixels in [0, 1], shape (H, W) or (H, W, 3).
        annotation (Annotation): Head points.
    """

    image: np.ndarray
    annotation: Annotation
    _density_cache: Dict[float, np.ndarray] = field(default_factory=dict, repr=False, compare=False)

    @property
    def image_id(self) -> str:
        return self.annotation.image_id

    @property
    def count(self) -> int:
        return self.annotation.count

    def tensor(self) -> Tensor:
        """Network input of shape (1, C, H, W) in the default element type."""
        pixels = self.image[None] if self.image.ndim == 2 else self.image.transpose(2, 0, 1)
        return Tensor(pixels[None].astype(get_default_dtype()))

    def ground_truth(self, sigma: float = DEFAULT_SIGMA) -> np.ndarray:
        """Density map pooled to prediction resolution, cached per sigma."""
        if sigma not in self._density_cache:
            full = generate_density(self.annotation, sigma)
            self._density_cache[sigma] = downsample_sum(full, MAP_STRIDE).values
        return self._density_cache[sigma]


class Dataset:
    """Ordered collection of samples.

    Attributes:
        samples (List[Sample]): Samples in annotation-document order.
        root (Optional[str]): Directory the samples were loaded from.
    """

    def __init__(self, samples: List[Sample], root: Optional[str] = None):
        self.samples = samples
        self.root = root

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, index: int) -> Sample:
        return self.samples[index]

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def mean_count(self) -> float:
        return float(np.mean([s.count for s in self.samples])) if self.samples else 0.0

    @classmethod
    def from_arrays(cls, images: List[np.ndarray], annotations: List[Annotation]) -> "Dataset":
        return cls([Sample(img, ann) for img, ann in zip(images, annotations)])

    @classmethod
    def load(cls, path: str, channels: int = 1) -> "Dataset":
        """Load a dataset directory or an annotation document and its images.

        Args:
            path (str): Dataset directory or path of the annotation document.
            channels (int): 1 to read grayscale, 3 to read colour.

        Returns:
            Dataset: Samples with images normalized to [0, 1].

        Raises:
            AnnotationParseError: If the document is malformed.
            AnnotationError: If a point lies outside its image.
            DimensionError: If an image's extents disagree with its entry.
            ContractError: If the document lists no images.
        """
        document = os.path.join(path, ANNOTATION_FILE) if os.path.isdir(path) else path
        manager = PathManager(os.path.dirname(document))
        samples: List[Sample] = []
        for ann in load_annotations(document):
            image = to_channels(read_pnm(manager.resolve(document, ann.image_id)), channels)
            if image.shape[:2] != (ann.height, ann.width):
                raise DimensionError(_formatter.format_dimension_error(
                    f"load {ann.image_id}", "image", image.shape[:2], (ann.height, ann.width)))
            samples.append(Sample(image, ann))
        if not samples:
            raise ContractError(f"Dataset {document} lists no images")
        logger.info("loaded %d sample(s) from %s", len(samples), document)
        return cls(samples, os.path.dirname(document))

    def save(self, directory: str) -> str:
        """Write images and the annotation document below ``directory``.

        Returns:
            str: Path of the written annotation document.
        """
        manager = PathManager(directory)
        for sample in self.samples:
            write_pnm(manager.resolve(manager.annotation_path(), sample.image_id), sample.image)
        save_annotations(manager.annotation_path(), [s.annotation for s in self.samples])
        return manager.annotation_path()
