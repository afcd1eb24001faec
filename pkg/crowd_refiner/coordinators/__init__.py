"""
Coordinator components package for the command-line operations.

Each coordinator owns one concern of a command so that ``cli`` only parses
arguments and wires coordinators together.

Components:
    - FileOperationsCoordinator: datasets, reports, density maps, traces, masks
    - TrainingCoordinator: training data preparation and training runs
    - EvaluationCoordinator: evaluation and prediction from a checkpoint
    - AblationCoordinator: the mode / step / context comparison grid

Example:
    >>> run_cfg = load_run_config(overrides={"iters": 100, "n": 4})
    >>> result = TrainingCoordinator(run_cfg, "runs/a").train()
    >>> report = EvaluationCoordinator(run_cfg, result.params).evaluate(Dataset.load("data"))
"""

from .file_operations import FileOperationsCoordinator
from .training import TrainingCoordinator, check_extents, synthetic_suite
from .evaluation import EvaluationCoordinator, Prediction
from .ablation import ABLATION_MODES, ABLATION_STEPS, AblationCoordinator, AblationReport, AblationRow

__all__ = [
    'FileOperationsCoordinator',
    'TrainingCoordinator',
    'check_extents',
    'synthetic_suite',
    'EvaluationCoordinator',
    'Prediction',
    'AblationCoordinator',
    'AblationReport',
    'AblationRow',
    'ABLATION_MODES',
    'ABLATION_STEPS',
]
