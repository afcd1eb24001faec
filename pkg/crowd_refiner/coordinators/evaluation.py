"""
Evaluation coordinator for trained checkpoints.

Loads a checkpoint under the architecture of the run configuration and
serves the ``eval`` and ``predict`` commands. The refinement step count and
transform mode come from the run configuration; ``evaluate`` can override
the step count, which is how the ablation sweeps steps on one network.
Every dataset or image is checked against the image extents the network
was built for before anything runs.

Example:
    >>> coordinator = EvaluationCoordinator.from_checkpoint(run_cfg, "runs/a/model.drsn")
    >>> coordinator.evaluate(dataset, n=0).mae >= 0.0
    True
    >>> coordinator.predict(image, "scene").density.shape
    (8, 8)
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from ..checkpoint import load_checkpoint
from ..config import RunConfig
from ..data.dataset import Dataset, Sample
from ..density import Annotation, DensityMap, sum_count
from ..evaluation import EvalReport, RoiMask, evaluate
from ..model.network import ForwardResult, drsan_forward
from ..model.params import MAP_STRIDE, ModelParams
from .training import check_extents

logger = logging.getLogger(__name__)


class Prediction(NamedTuple):
    """Refined density map of one image with its count."""

    image_id: str
    density: np.ndarray
    count: float
    forward: ForwardResult


class EvaluationCoordinator:
    """Runs a fixed set of parameters over datasets and single images.

    Attributes:
        run_cfg (RunConfig): Merged configuration; ``n`` and ``mode`` select
            the refinement.
        params (ModelParams): Parameters without gradient tracking.
    """

    def __init__(self, run_cfg: RunConfig, params: ModelParams):
        self.run_cfg = run_cfg
        self.params = params.frozen()

    @classmethod
    def from_checkpoint(cls, run_cfg: RunConfig, path: str) -> "EvaluationCoordinator":
        params = load_checkpoint(path, run_cfg.model_config(), requires_grad=False)
        logger.info("loaded %s (%d values)", path, params.num_elements())
        return cls(run_cfg, params)

    def evaluate(self, dataset: Dataset, roi: Optional[RoiMask] = None, n: Optional[int] = None) -> EvalReport:
        check_extents(dataset, self.params.config)
        steps = self.run_cfg['n'] if n is None else n
        return evaluate(self.params, dataset, steps, self.run_cfg['mode'], roi, self.run_cfg['sigma'])

    def predict(self, image: np.ndarray, image_id: str) -> Prediction:
        """Refined density map and count of one image."""
        cfg = self.params.config
        sample = Sample(image, Annotation(image_id, [], image.shape[0], image.shape[1]))
        check_extents(Dataset([sample]), cfg)
        result = drsan_forward(sample.tensor(), self.params, self.run_cfg['n'], self.run_cfg['mode'])
        density = np.asarray(result.mn.data[0, 0], dtype=np.float64)
        return Prediction(image_id, density, sum_count(DensityMap(density, MAP_STRIDE)), result)
