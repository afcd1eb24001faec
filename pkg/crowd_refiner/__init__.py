"""
Crowd counting by recurrent spatial-aware density refinement.

A convolutional front end predicts an initial density map at 1/8 of the
image resolution. An LSTM then repeatedly picks an affine region of the
current map, a small refinement network predicts a residual for that
region from the crop and a global context map, and the residual is
scattered back through the inverse transform. The count is the sum of the
refined map.

Everything runs on NumPy with a small reverse-mode autodiff engine, so the
whole pipeline (synthetic data, training, evaluation, gradient checks and
ablations) works on a laptop.

Features:
    - Differentiable spatial transformer with T, T+S, T+S+R and free
      affine constraints
    - Seeded synthetic crowd scenes and annotation ingestion
    - Checkpoints with CRC32 integrity and inventory checks
    - ROI-restricted MAE / MSE evaluation

Example:
    >>> import numpy as np
    >>> from crowd_refiner import ModelConfig, init_params, drsan_forward, Tensor
    >>> params = init_params(ModelConfig(image_h=64, image_w=64), seed=7)
    >>> m0, mn, trace = drsan_forward(Tensor(np.zeros((1, 1, 64, 64))), params, n=4)
    >>> mn.shape, len(trace)
    ((1, 1, 8, 8), 4)

Version: 1.0.0
"""

from .checkpoint import load_checkpoint, save_checkpoint
from .data import Dataset, SceneConfig, gen_synthetic
from .density import Annotation, DensityMap, generate_density, sum_count
from .evaluation import EvalReport, evaluate, metrics
from .model import ModelConfig, ModelParams, drsan_forward
from .stn import AffineTransform, TransformMode
from .tensor_core import Tensor
from .training import TrainConfig, init_params, train

__version__ = '1.0.0'

__all__ = [
    'load_checkpoint',
    'save_checkpoint',
    'Dataset',
    'SceneConfig',
    'gen_synthetic',
    'Annotation',
    'DensityMap',
    'generate_density',
    'sum_count',
    'EvalReport',
    'evaluate',
    'metrics',
    'ModelConfig',
    'ModelParams',
    'drsan_forward',
    'AffineTransform',
    'TransformMode',
    'Tensor',
    'TrainConfig',
    'init_params',
    'train',
]
