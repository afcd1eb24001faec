"""
Ablation coordinator: transform modes, refinement steps and global context.

For every seed one network is trained per transform mode (T, T+S, T+S+R)
with global context, and one T+S+R network without it, all under the same
budget. Each mode's network is then evaluated at every step count of the
sweep, which gives one row per (mode, n). Two more rows compare the T+S+R
networks with and without context at the trained step count. MAE and MSE
of a row are averaged over seeds; the per-seed values are kept.

Three directional checks are reported with the table:

* ``mode_ordering``: MAE(T) >= MAE(T+S) >= MAE(T+S+R) for most seeds
* ``context``: MAE without context >= MAE with context for most seeds
* ``refinement``: for every mode the best n > 0 is no worse than n = 0

Example:
    >>> report = AblationCoordinator(load_run_config("ablate.cfg"), seeds=[7, 8, 9]).run()
    >>> len(report.rows)
    17
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..config import RunConfig
from ..data.dataset import Dataset
from ..stn import TransformMode
from .evaluation import EvaluationCoordinator
from .training import TrainingCoordinator

logger = logging.getLogger(__name__)

ABLATION_MODES = (TransformMode.T, TransformMode.TS, TransformMode.TSR)
ABLATION_STEPS = (0, 10, 20, 30, 40)
# seeds used when none are given: the configured seed and its two successors
DEFAULT_SEED_COUNT = 3


@dataclass
class AblationRow:
    """One configuration of the comparison table.

    Attributes:
        group (str): ``refinement`` for the mode/step grid, ``context`` for
            the two context rows.
        mode (str): Transform constraint.
        n (int): Refinement steps at evaluation.
        context (bool): Whether the network used global context.
        maes (List[float]): MAE per seed.
        mses (List[float]): MSE per seed.
    """

    group: str
    mode: str
    n: int
    context: bool
    maes: List[float] = field(default_factory=list)
    mses: List[float] = field(default_factory=list)

    @property
    def mae(self) -> float:
        return float(np.mean(self.maes))

    @property
    def mse(self) -> float:
        return float(np.mean(self.mses))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': self.group, 'mode': self.mode, 'n': self.n,
            'context': 'on' if self.context else 'off',
            'mae': self.mae, 'mse': self.mse, 'mae_per_seed': self.maes, 'mse_per_seed': self.mses,
        }


@dataclass
class AblationReport:
    """Comparison table plus the directional checks."""

    seeds: List[int]
    train_n: int
    rows: List[AblationRow] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)

    def row(self, group: str, mode: str, n: int, context: bool = True) -> AblationRow:
        for r in self.rows:
            if (r.group, r.mode, r.n, r.context) == (group, mode, n, context):
                return r
        r = AblationRow(group, mode, n, context)
        self.rows.append(r)
        return r

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seeds': self.seeds,
            'train_n': self.train_n,
            'rows': [r.to_dict() for r in self.rows],
            'checks': self.checks,
        }

    def to_table(self) -> str:
        lines = [f"{'group':<11} {'mode':<6} {'n':>3} {'context':>7} {'MAE':>10} {'MSE':>10}"]
        for r in self.rows:
            lines.append(f"{r.group:<11} {r.mode:<6} {r.n:>3} {'on' if r.context else 'off':>7} "
                         f"{r.mae:>10.4f} {r.mse:>10.4f}")
        lines.append('')
        for name, ok in self.checks.items():
            lines.append(f"{name}: {'holds' if ok else 'FAILS'}")
        return '\n'.join(lines)


def _majority(flags: Sequence[bool]) -> bool:
    return sum(flags) * 2 > len(flags)


class AblationCoordinator:
    """Trains and evaluates the ablation grid.

    Attributes:
        run_cfg (RunConfig): Shared budget and architecture; ``n`` is the
            trained step count.
        seeds (List[int]): Seeds of data, initialization and sample order;
            three consecutive seeds from the configured one by default.
        steps (Sequence[int]): Step counts evaluated for every mode.
    """

    def __init__(self, run_cfg: RunConfig, seeds: Optional[Sequence[int]] = None,
                 steps: Sequence[int] = ABLATION_STEPS):
        self.run_cfg = run_cfg
        self.seeds = list(seeds) if seeds else [run_cfg['seed'] + k for k in range(DEFAULT_SEED_COUNT)]
        self.steps = tuple(steps)
        self.training = TrainingCoordinator(run_cfg)

    def _evaluator(self, params, mode: TransformMode) -> EvaluationCoordinator:
        return EvaluationCoordinator(self.run_cfg.override({'mode': mode}), params)

    def _run_seed(self, seed: int, report: AblationReport, shared: Optional[Dataset]) -> Dict[str, float]:
        dataset = shared if shared is not None else self.training.dataset(seed)
        at_train_n: Dict[str, float] = {}
        for mode in ABLATION_MODES:
            params = self.training.train(dataset, mode=mode, context=True, seed=seed).params
            evaluator = self._evaluator(params, mode)
            for n in self.steps:
                result = evaluator.evaluate(dataset, n=n)
                row = report.row('refinement', mode.value, n)
                row.maes.append(result.mae)
                row.mses.append(result.mse)
            trained = evaluator.evaluate(dataset, n=report.train_n)
            at_train_n[mode.value] = trained.mae
            if mode is TransformMode.TSR:
                row = report.row('context', mode.value, report.train_n, True)
                row.maes.append(trained.mae)
                row.mses.append(trained.mse)

        params = self.training.train(dataset, mode=TransformMode.TSR, context=False, seed=seed).params
        without = self._evaluator(params, TransformMode.TSR).evaluate(dataset, n=report.train_n)
        row = report.row('context', TransformMode.TSR.value, report.train_n, False)
        row.maes.append(without.mae)
        row.mses.append(without.mse)
        at_train_n['no_context'] = without.mae
        logger.info("ablation seed %d: %s", seed, ", ".join(f"{k}={v:.4f}" for k, v in at_train_n.items()))
        return at_train_n

    def run(self) -> AblationReport:
        """Run every seed and fill in the directional checks.

        The table is produced whether or not the checks hold.
        """
        report = AblationReport(self.seeds, self.run_cfg['n'])
        shared = self.training.dataset() if self.run_cfg['data'] else None
        per_seed = [self._run_seed(seed, report, shared) for seed in self.seeds]

        t, ts, tsr = (m.value for m in ABLATION_MODES)
        report.checks['mode_ordering'] = _majority([s[t] >= s[ts] >= s[tsr] for s in per_seed])
        report.checks['context'] = _majority([s['no_context'] >= s[tsr] for s in per_seed])
        refined = [n for n in self.steps if n > 0]
        if 0 in self.steps and refined:
            report.checks['refinement'] = all(
                min(report.row('refinement', m.value, n).mae for n in refined)
                <= report.row('refinement', m.value, 0).mae
                for m in ABLATION_MODES
            )
        for name, ok in report.checks.items():
            log = logger.info if ok else logger.warning
            log("ablation check %s %s", name, "holds" if ok else "fails")
        return report
