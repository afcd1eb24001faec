"""
Training coordinator: dataset preparation and one training run.

The training data is either a dataset on disk (``data`` key) or a synthetic
suite rendered from the scene settings of the run configuration. Every
image must have the extents the network is configured for.

Example:
    >>> coordinator = TrainingCoordinator(load_run_config(overrides={"iters": 10}), "runs/a")
    >>> result = coordinator.train()
    >>> result.checkpoint_path
    'runs/a/model.drsn'
"""

import logging
from typing import Optional

from ..config import RunConfig, worker_count
from ..data.dataset import Dataset
from ..data.synthetic import gen_synthetic
from ..model.params import ModelConfig, ModelParams
from ..training.trainer import TrainResult, train
from ..validators.base.error_handler import DimensionError, ErrorFormatter
from .file_operations import FileOperationsCoordinator

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()


def synthetic_suite(run_cfg: RunConfig, seed: Optional[int] = None) -> Dataset:
    """Render ``num_images`` scenes from the run's scene settings."""
    scene_cfg = run_cfg.scene_config(**({'seed': seed} if seed is not None else {}))
    images, annotations = gen_synthetic(scene_cfg, run_cfg['num_images'], worker_count())
    return Dataset.from_arrays(images, annotations)


def check_extents(dataset: Dataset, model_cfg: ModelConfig) -> None:
    """Raise DimensionError for the first image the network cannot take."""
    expected = (model_cfg.image_h, model_cfg.image_w)
    for sample in dataset:
        if sample.image.shape[:2] != expected:
            raise DimensionError(_formatter.format_dimension_error(
                sample.image_id, "image", sample.image.shape[:2], expected))


class TrainingCoordinator:
    """Coordinates dataset preparation and training for the ``train`` command.

    Attributes:
        run_cfg (RunConfig): Merged configuration.
        output_dir (Optional[str]): Run directory, None to keep results in memory.
        model_cfg (ModelConfig): Network architecture.
    """

    def __init__(self, run_cfg: RunConfig, output_dir: Optional[str] = None):
        self.run_cfg = run_cfg
        self.output_dir = output_dir
        self.model_cfg = run_cfg.model_config()

    def dataset(self, seed: Optional[int] = None) -> Dataset:
        data = self.run_cfg['data']
        if data:
            dataset = FileOperationsCoordinator(self.output_dir or '.').load_dataset(data, self.model_cfg.channels)
        else:
            dataset = synthetic_suite(self.run_cfg, seed)
        check_extents(dataset, self.model_cfg)
        return dataset

    def train(self, dataset: Optional[Dataset] = None, params: Optional[ModelParams] = None,
              **changes) -> TrainResult:
        """Train on ``dataset`` (prepared from the config when None).

        Keyword arguments override run configuration keys for this run only,
        for example ``mode`` or ``context`` in an ablation.
        """
        model_cfg = self.run_cfg.model_config(**changes) if changes else self.model_cfg
        train_cfg = self.run_cfg.train_config(**changes)
        dataset = dataset if dataset is not None else self.dataset()
        logger.info("training %s for %d iteration(s), n=%d, mode %s, context %s",
                    self.output_dir or "in memory", train_cfg.iterations, train_cfg.n,
                    model_cfg.mode.value, "on" if model_cfg.context else "off")
        return train(train_cfg, model_cfg, dataset, self.output_dir, params)
