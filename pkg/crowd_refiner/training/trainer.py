"""
Single-image training loop.

Each iteration draws one sample (epoch-wise shuffled with the seeded
generator), optionally crops and resizes it, runs the full network, takes
the two-term squared-error loss, back-propagates and applies one Adam
update with the decayed learning rate. Every ``log_every`` iterations one
line ``iter loss mae0 maen lr`` is appended to the metrics log, with the
loss and both count errors averaged over the iterations since the previous
line.

Example:
    >>> result = train(TrainConfig(iterations=10, n=2), model_cfg, dataset, out_dir="runs/a")
    >>> result.log_lines[-1].split()[0]
    '10'
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..checkpoint import save_checkpoint
from ..data.augment import augment_crop_resize
from ..data.dataset import Dataset, Sample
from ..data.rng import SplitMix64
from ..density import DEFAULT_SIGMA
from ..model.network import drsan_forward
from ..model.params import ModelConfig, ModelParams
from ..path_manager import PathManager
from ..tensor_core import Tensor
from ..validators.base.error_handler import ConfigError, ContractError, DivergenceError, ErrorFormatter
from .init import INIT_STD, init_params
from .loss import loss
from .optimizer import OptimizerState, adam_step, clip_grad_norm, lr_at

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()


@dataclass
class TrainConfig:
    """Optimization settings.

    Attributes:
        lr0 (float): Initial learning rate.
        decay (float): Multiplicative decay applied every ``decay_every``
            iterations.
        decay_every (int): Decay period in iterations.
        beta1 (float): Adam first-moment decay.
        beta2 (float): Adam second-moment decay.
        eps (float): Adam denominator offset.
        iterations (int): Number of single-image updates.
        n (int): Refinement iterations of the network.
        seed (int): Seed of initialization, sample order and augmentation.
        sigma (float): Ground-truth kernel width in pixels.
        init_std (float): Standard deviation of the weight initialization.
        log_every (int): Metrics-log period.
        checkpoint_every (int): Intermediate checkpoint period, 0 for none.
        clip_norm (float): Global gradient-norm bound, 0 for none.
        augment (bool): Whether to crop-and-resize each drawn sample.
        crop_min (float): Smallest crop side fraction.
        crop_max (float): Largest crop side fraction.
        data (Optional[str]): Dataset directory.
    """

    lr0: float = 1e-4
    decay: float = 0.98
    decay_every: int = 1000
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    iterations: int = 2000
    n: int = 30
    seed: int = 7
    sigma: float = DEFAULT_SIGMA
    init_std: float = INIT_STD
    log_every: int = 100
    checkpoint_every: int = 0
    clip_norm: float = 0.0
    augment: bool = False
    crop_min: float = 0.5
    crop_max: float = 0.9
    data: Optional[str] = None

    def __post_init__(self):
        checks = (
            ('lr0', self.lr0 > 0, "must be > 0"),
            ('iterations', self.iterations >= 0, "must be >= 0"),
            ('n', self.n >= 0, "must be >= 0"),
            ('decay_every', self.decay_every >= 1, "must be >= 1"),
            ('log_every', self.log_every >= 1, "must be >= 1"),
            ('sigma', self.sigma > 0, "must be > 0"),
            ('crop range', 0 < self.crop_min <= self.crop_max <= 1, "need 0 < crop_min <= crop_max <= 1"),
        )
        for name, ok, reason in checks:
            if not ok:
                raise ConfigError(_formatter.format_invalid_value_error(getattr(self, name, None), name, reason))


@dataclass
class TrainResult:
    """Outcome of a training run.

    Attributes:
        params (ModelParams): Trained parameters.
        log_lines (List[str]): Metrics-log lines in order.
        losses (List[float]): Loss of every iteration.
        checkpoint_path (Optional[str]): Final checkpoint, when written.
    """

    params: ModelParams
    log_lines: List[str] = field(default_factory=list)
    losses: List[float] = field(default_factory=list)
    checkpoint_path: Optional[str] = None


def format_log_line(iteration: int, loss_value: float, mae0: float, maen: float, lr: float) -> str:
    return f"{iteration} {loss_value:.6e} {mae0:.6f} {maen:.6f} {lr:.6e}"


class Trainer:
    """Owns parameters and optimizer state for one run.

    Attributes:
        cfg (TrainConfig): Optimization settings.
        params (ModelParams): Parameters being trained.
        dataset (Dataset): Training samples.
        opt (OptimizerState): Adam moments.
        paths (Optional[PathManager]): Run directory, None to write nothing.
    """

    def __init__(self, cfg: TrainConfig, model_cfg: ModelConfig, dataset: Dataset,
                 out_dir: Optional[str] = None, params: Optional[ModelParams] = None):
        if len(dataset) == 0:
            raise ContractError("Training needs at least one sample")
        self.cfg = cfg
        self.dataset = dataset
        self.params = params if params is not None else init_params(model_cfg, cfg.seed, cfg.init_std)
        self.opt = OptimizerState(cfg.beta1, cfg.beta2, cfg.eps)
        self.paths = PathManager(out_dir) if out_dir else None
        self._rng = SplitMix64(cfg.seed)
        self._order: List[int] = []

    def _next_sample(self) -> Sample:
        if not self._order:
            self._order = self._rng.permutation(len(self.dataset))
            self._order.reverse()
        sample = self.dataset[self._order.pop()]
        if not self.cfg.augment:
            return sample
        image, ann = augment_crop_resize(
            sample.image, sample.annotation, self._rng, (self.cfg.crop_min, self.cfg.crop_max)
        )
        return Sample(image, ann)

    def step(self, iteration: int) -> tuple:
        """Run one update; return (loss, |count error| of M0, of Mn, lr)."""
        sample = self._next_sample()
        target_map = sample.ground_truth(self.cfg.sigma)
        self.params.zero_grad()
        m0, mn, _ = drsan_forward(sample.tensor(), self.params, self.cfg.n)
        target = Tensor(target_map.reshape(m0.shape).astype(m0.data.dtype))
        objective = loss(m0, mn, target)
        value = objective.item()
        if not math.isfinite(value):
            raise DivergenceError(f"Non-finite loss {value} at iteration {iteration}", iteration=iteration)
        objective.backward()

        grads = self.params.grads()
        if self.cfg.clip_norm > 0:
            clip_grad_norm(grads, self.cfg.clip_norm)
        lr = lr_at(iteration, self.cfg)
        adam_step(self.params, grads, self.opt, lr)

        truth = float(target_map.sum())
        return value, abs(float(m0.data.sum()) - truth), abs(float(mn.data.sum()) - truth), lr

    def run(self) -> TrainResult:
        """Train for the configured number of iterations.

        Returns:
            TrainResult: Parameters, metrics lines and per-iteration losses.

        Raises:
            DivergenceError: On a non-finite loss or gradient.
        """
        cfg = self.cfg
        result = TrainResult(self.params)
        log_file = None
        if self.paths:
            self.paths.ensure_directory(self.paths.metrics_path())
            log_file = open(self.paths.metrics_path(), 'w', encoding='utf-8')
        window: List[tuple] = []
        try:
            for iteration in range(cfg.iterations):
                stats = self.step(iteration)
                result.losses.append(stats[0])
                window.append(stats)
                done = iteration + 1
                if done % cfg.log_every == 0 or done == cfg.iterations:
                    mean = np.mean(np.array(window)[:, :3], axis=0)
                    line = format_log_line(done, mean[0], mean[1], mean[2], stats[3])
                    result.log_lines.append(line)
                    logger.info("iter %s", line)
                    if log_file:
                        log_file.write(line + '\n')
                        log_file.flush()
                    window = []
                if self.paths and cfg.checkpoint_every and done % cfg.checkpoint_every == 0 and done < cfg.iterations:
                    save_checkpoint(self.params, self.paths.checkpoint_path(done))
        finally:
            if log_file:
                log_file.close()

        if self.paths:
            result.checkpoint_path = self.paths.checkpoint_path()
            save_checkpoint(self.params, result.checkpoint_path)
        return result


def train(cfg: TrainConfig, model_cfg: ModelConfig, dataset: Dataset,
          out_dir: Optional[str] = None, params: Optional[ModelParams] = None) -> TrainResult:
    """Train a network and, when ``out_dir`` is given, write its checkpoint and metrics log."""
    return Trainer(cfg, model_cfg, dataset, out_dir, params).run()
