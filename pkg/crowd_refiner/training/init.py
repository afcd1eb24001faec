"""
Parameter initialization.

Weights are drawn from a zero-mean normal with standard deviation 0.01,
truncated at two standard deviations; biases start at zero. The transform
head is the exception: its weights start at zero and its bias selects the
full-map glimpse, so the first refinement attends to the whole map.

Example:
    >>> params = init_params(ModelConfig(image_h=32, image_w=32, width=0.25, hidden=8), seed=3)
    >>> float(abs(params['lstm.weight_h'].data).max()) <= 0.02
    True
"""

import logging

import numpy as np
from scipy.stats import truncnorm

from ..model.params import ModelConfig, ModelParams, head_bias, parameter_inventory
from ..tensor_core import Tensor, get_default_dtype

logger = logging.getLogger(__name__)

INIT_STD = 0.01
TRUNCATION = 2.0


def init_params(cfg: ModelConfig, seed: int, std: float = INIT_STD) -> ModelParams:
    """Draw a fresh parameter set, deterministic per seed.

    Args:
        cfg (ModelConfig): Network configuration fixing the inventory.
        seed (int): Seed of the draw.
        std (float): Standard deviation before truncation.

    Returns:
        ModelParams: Parameters requiring gradients, in the default dtype.
    """
    rng = np.random.default_rng(seed)
    dtype = get_default_dtype()
    tensors = {}
    for name, shape in parameter_inventory(cfg).items():
        kind = name.rsplit('.', 1)[-1]
        if name == 'head.bias':
            values = head_bias(cfg.mode)
        elif name == 'head.weight' or not kind.startswith('weight'):
            values = np.zeros(shape)
        else:
            values = truncnorm.rvs(-TRUNCATION, TRUNCATION, loc=0.0, scale=std, size=shape, random_state=rng)
        tensors[name] = Tensor(np.asarray(values, dtype=dtype), requires_grad=True, name=name)
    params = ModelParams(cfg, tensors)
    logger.debug("initialized %d arrays (%d values) with seed %d", len(params), params.num_elements(), seed)
    return params
