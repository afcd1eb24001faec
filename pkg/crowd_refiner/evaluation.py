"""
Counting metrics and dataset evaluation.

MAE is the mean absolute count error; MSE, as customary in crowd counting,
is the root of the mean squared count error. Evaluation can be restricted to
a region of interest: both the predicted and the ground-truth density maps
are multiplied by a binary mask at prediction resolution before summing.

Example:
    >>> metrics([(10, 13), (20, 16)])
    (3.5, 3.5355339059327378)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .data.dataset import Dataset
from .density import DEFAULT_SIGMA, DensityMap, sum_count
from .model.network import drsan_forward
from .model.params import MAP_STRIDE, ModelParams
from .stn import TransformMode
from .validators.base.error_handler import ContractError, DimensionError, ErrorFormatter

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

RoiMask = Union[np.ndarray, Sequence[np.ndarray]]


def metrics(pairs: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Return (MAE, MSE) of (ground truth, estimate) pairs.

    Raises:
        ContractError: If ``pairs`` is empty.
    """
    if len(pairs) == 0:
        raise ContractError("metrics needs at least one (truth, estimate) pair")
    errors = np.array([float(p) - float(q) for p, q in pairs])
    return float(np.mean(np.abs(errors))), float(math.sqrt(np.mean(errors * errors)))


@dataclass
class ImageResult:
    """Counts of one image.

    Attributes:
        image_id (str): Image identifier.
        truth (float): Ground-truth count inside the mask.
        estimate (float): Count of the refined map inside the mask.
        initial (float): Count of the initial map inside the mask.
    """

    image_id: str
    truth: float
    estimate: float
    initial: float


@dataclass
class EvalReport:
    """Per-image counts and aggregate metrics.

    Attributes:
        rows (List[ImageResult]): One entry per image.
        n (int): Refinement iterations used.
        mode (str): Transform constraint used.
    """

    rows: List[ImageResult] = field(default_factory=list)
    n: int = 0
    mode: str = TransformMode.TSR.value

    @property
    def count(self) -> int:
        return len(self.rows)

    @property
    def mae(self) -> float:
        return metrics([(r.truth, r.estimate) for r in self.rows])[0]

    @property
    def mse(self) -> float:
        return metrics([(r.truth, r.estimate) for r in self.rows])[1]

    @property
    def mae_initial(self) -> float:
        return metrics([(r.truth, r.initial) for r in self.rows])[0]

    @property
    def mse_initial(self) -> float:
        return metrics([(r.truth, r.initial) for r in self.rows])[1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'mode': self.mode,
            'images': self.count,
            'mae': self.mae,
            'mse': self.mse,
            'mae_initial': self.mae_initial,
            'mse_initial': self.mse_initial,
            'rows': [
                {'image': r.image_id, 'truth': r.truth, 'estimate': r.estimate, 'initial': r.initial}
                for r in self.rows
            ],
        }

    def to_table(self) -> str:
        """Fixed-width text rendering: one row per image, then the aggregates."""
        width = max([len('image')] + [len(r.image_id) for r in self.rows])
        lines = [f"{'image':<{width}}  {'truth':>10}  {'initial':>10}  {'refined':>10}"]
        for r in self.rows:
            lines.append(f"{r.image_id:<{width}}  {r.truth:>10.3f}  {r.initial:>10.3f}  {r.estimate:>10.3f}")
        lines.append(f"{'MAE':<{width}}  {'':>10}  {self.mae_initial:>10.3f}  {self.mae:>10.3f}")
        lines.append(f"{'MSE':<{width}}  {'':>10}  {self.mse_initial:>10.3f}  {self.mse:>10.3f}")
        return '\n'.join(lines)


def _mask_for(roi: Optional[RoiMask], index: int, shape: Tuple[int, int]) -> np.ndarray:
    if roi is None:
        return np.ones(shape)
    mask = roi if isinstance(roi, np.ndarray) else roi[index]
    mask = np.asarray(mask, dtype=np.float64)
    if mask.shape != shape:
        raise DimensionError(_formatter.format_dimension_error("evaluate", "roi", mask.shape, shape))
    return (mask != 0).astype(np.float64)


def evaluate(params: ModelParams, dataset: Dataset, n: int, mode: Optional[TransformMode] = None,
             roi: Optional[RoiMask] = None, sigma: float = DEFAULT_SIGMA) -> EvalReport:
    """Count every image of ``dataset`` with ``n`` refinement iterations.

    Args:
        params (ModelParams): Trained parameters; evaluated without gradient
            tracking.
        dataset (Dataset): Images with annotations.
        n (int): Refinement iterations.
        mode (Optional[TransformMode]): Transform constraint override.
        roi (Optional[RoiMask]): One mask shared by all images or one mask
            per image, at prediction resolution; nonzero marks the region.
        sigma (float): Ground-truth kernel width.

    Returns:
        EvalReport: Per-image counts and aggregates.

    Raises:
        DimensionError: If a mask does not match the prediction resolution.
        ContractError: If the dataset is empty.
    """
    if len(dataset) == 0:
        raise ContractError("evaluate needs at least one image")
    frozen = params.frozen()
    mode = mode or params.config.mode
    report = EvalReport(n=n, mode=mode.value)
    for index, sample in enumerate(dataset):
        m0, mn, _ = drsan_forward(sample.tensor(), frozen, n, mode)
        shape = m0.shape[2:]
        mask = _mask_for(roi, index, shape)
        truth_map = sample.ground_truth(sigma)
        if truth_map.shape != shape:
            raise DimensionError(_formatter.format_dimension_error("evaluate", "ground truth", truth_map.shape, shape))
        report.rows.append(ImageResult(
            image_id=sample.image_id,
            truth=sum_count(DensityMap(truth_map, MAP_STRIDE), mask),
            estimate=sum_count(DensityMap(mn.data[0, 0], MAP_STRIDE), mask),
            initial=sum_count(DensityMap(m0.data[0, 0], MAP_STRIDE), mask),
        ))
    logger.info("evaluated %d image(s) at n=%d: MAE %.4f, MSE %.4f", report.count, n, report.mae, report.mse)
    return report
