"""
Training package.

Components:
    - loss: two-term squared-error objective
    - optimizer: lr_at, OptimizerState, adam_step, clip_grad_norm
    - init: init_params
    - trainer: TrainConfig, Trainer, train
"""

from .loss import loss
from .optimizer import OptimizerState, adam_step, clip_grad_norm, lr_at
from .init import init_params, INIT_STD
from .trainer import TrainConfig, TrainResult, Trainer, train, format_log_line

__all__ = [
    'loss',
    'OptimizerState',
    'adam_step',
    'clip_grad_norm',
    'lr_at',
    'init_params',
    'INIT_STD',
    'TrainConfig',
    'TrainResult',
    'Trainer',
    'train',
    'format_log_line',
]
