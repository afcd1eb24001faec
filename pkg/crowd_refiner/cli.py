"""
Command-line interface of the crowd counter.

Subcommands:
    gen-data   render a synthetic dataset (images plus annotations.json)
    train      train a network and write its checkpoint and metrics log
    eval       evaluate a checkpoint on a dataset, optionally inside a ROI
    predict    write density maps (CSV and PGM) and print counts of images
    gradcheck  compare analytic and finite-difference gradients
    ablate     train and compare transform modes, step counts and context

Settings come from defaults, then a ``key = value`` file (``--config``),
then flags; flags win. ``DRSAN_THREADS`` caps worker threads and may be set
in a ``.env`` file. Every command returns 0 on success and 1 on any error;
argument errors exit with 2.

Example:
    $ python crowd_count.py gen-data --count 8 --out data/synth
    $ python crowd_count.py train --config train.cfg --data data/synth --out runs/a
    $ python crowd_count.py eval --checkpoint runs/a/model.drsn --data data/synth --n 4
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from dotenv import load_dotenv

from .config import RunConfig, load_run_config, worker_count
from .coordinators import (
    AblationCoordinator,
    EvaluationCoordinator,
    FileOperationsCoordinator,
    TrainingCoordinator,
)
from .data.dataset import Dataset
from .data.synthetic import gen_synthetic
from .gradcheck import NETWORK_TOLERANCE, PRIMITIVE_TOLERANCE, network_suite, primitive_suite
from .tensor_core import set_default_dtype
from .validators.base.error_handler import ConfigError, CrowdRefinerError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _seed_list(text: str) -> List[int]:
    try:
        seeds = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from None
    if not seeds:
        raise argparse.ArgumentTypeError("expected at least one seed")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="key = value configuration file")
    common.add_argument('--seed', type=int)
    common.add_argument('--n', type=int, help="refinement steps")
    common.add_argument('--mode', choices=['t', 'ts', 'tsr', 'raw'])
    common.add_argument('--context', choices=['on', 'off'])
    common.add_argument('--iters', type=int, help="training iterations")
    common.add_argument('--out', help="output directory")
    common.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])

    parser = argparse.ArgumentParser(prog='crowd_count', description="Recurrent spatial-aware crowd counting")
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen-data', parents=[common], help="render a synthetic dataset")
    gen.add_argument('--count', type=int, help="number of images (config key num_images)")
    gen.set_defaults(handler=cmd_gen_data, default_out='data/synthetic')

    train = sub.add_parser('train', parents=[common], help="train a network")
    train.add_argument('--data', help="dataset directory; a synthetic suite is rendered when omitted")
    train.set_defaults(handler=cmd_train, default_out='runs/train')

    ev = sub.add_parser('eval', parents=[common], help="evaluate a checkpoint")
    ev.add_argument('--checkpoint', required=True)
    ev.add_argument('--data', help="dataset directory or annotation document")
    ev.add_argument('--roi', help="PGM mask at density-map resolution, nonzero inside")
    ev.set_defaults(handler=cmd_eval, default_out='runs/eval')

    pred = sub.add_parser('predict', parents=[common], help="predict density maps")
    pred.add_argument('--checkpoint', required=True)
    pred.add_argument('images', nargs='+', help="PGM or PPM images")
    pred.set_defaults(handler=cmd_predict, default_out='runs/predict')

    grad = sub.add_parser('gradcheck', parents=[common], help="finite-difference gradient suites")
    grad.add_argument('--suite', choices=['all', 'primitive', 'network'], default='all')
    grad.set_defaults(handler=cmd_gradcheck, default_out=None)

    abl = sub.add_parser('ablate', parents=[common], help="mode / step / context comparison")
    abl.add_argument('--seeds', type=_seed_list, help="comma-separated seeds, e.g. 7,8,9")
    abl.add_argument('--data', help="dataset directory; synthetic suites per seed when omitted")
    abl.set_defaults(handler=cmd_ablate, default_out='runs/ablate')
    return parser


def run_config(args: argparse.Namespace, **extra: Any) -> RunConfig:
    """Merge defaults, ``--config`` and flags, then apply the element type."""
    overrides: Dict[str, Any] = {
        'seed': args.seed, 'n': args.n, 'mode': args.mode, 'context': args.context,
        'iters': args.iters, 'data': getattr(args, 'data', None),
    }
    overrides.update(extra)
    cfg = load_run_config(args.config, overrides)
    cfg.apply_dtype()
    for line in cfg.describe():
        logger.debug("config %s", line)
    return cfg


def output_dir(args: argparse.Namespace) -> str:
    return args.out or args.default_out


def cmd_gen_data(args: argparse.Namespace) -> int:
    cfg = run_config(args, n=None, num_images=args.count)
    images, annotations = gen_synthetic(cfg.scene_config(), cfg['num_images'], worker_count())
    document = FileOperationsCoordinator(output_dir(args)).write_dataset(Dataset.from_arrays(images, annotations))
    print(document)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    result = TrainingCoordinator(cfg, output_dir(args)).train()
    if result.log_lines:
        print(result.log_lines[-1])
    print(result.checkpoint_path)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    if not cfg['data']:
        raise ConfigError("eval needs a dataset: pass --data or set 'data' in the config")
    files = FileOperationsCoordinator(output_dir(args))
    dataset = files.load_dataset(cfg['data'], cfg['channels'])
    roi = files.read_roi(args.roi) if args.roi else None
    report = EvaluationCoordinator.from_checkpoint(cfg, args.checkpoint).evaluate(dataset, roi)
    json_path, _ = files.write_report(report.to_dict(), report.to_table(), 'report')
    print(f"MAE {report.mae:.6f} MSE {report.mse:.6f} ({report.count} images, n={report.n}) -> {json_path}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    files = FileOperationsCoordinator(output_dir(args))
    evaluator = EvaluationCoordinator.from_checkpoint(cfg, args.checkpoint)
    for path in args.images:
        stem = files.stem_for(path)
        prediction = evaluator.predict(files.read_image(path, cfg['channels']), path)
        files.write_density(prediction.density, f"{stem}_density")
        files.write_trace(prediction.forward.trace, f"{stem}_trace")
        print(f"{path} {prediction.count:.9f}")
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    run_config(args)
    # finite differences need 64-bit values whatever the config says
    set_default_dtype('float64')
    seed = args.seed if args.seed is not None else 0
    failures = 0
    suites: List[tuple] = []
    if args.suite in ('all', 'primitive'):
        suites.append(('primitive', primitive_suite, PRIMITIVE_TOLERANCE))
    if args.suite in ('all', 'network'):
        suites.append(('network', network_suite, NETWORK_TOLERANCE))
    for name, suite, tolerance in suites:
        errors = suite(seed=seed)
        for key in sorted(errors):
            ok = errors[key] <= tolerance
            failures += not ok
            print(f"{name:<9} {key:<32} {errors[key]:.3e} {'ok' if ok else 'FAIL'}")
        print(f"{name:<9} {'max':<32} {max(errors.values()):.3e} (tolerance {tolerance:.0e})")
    if failures:
        logger.error("%d gradient check(s) above tolerance", failures)
        return 1
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    cfg = run_config(args)
    report = AblationCoordinator(cfg, args.seeds).run()
    files = FileOperationsCoordinator(output_dir(args))
    json_path, _ = files.write_report(report.to_dict(), report.to_table(), 'ablation')
    print(report.to_table())
    print(json_path)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run the selected command; return its exit status."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except CrowdRefinerError as e:
        logger.error("%s: %s", type(e).__name__, e.message)
    except OSError as e:
        logger.error("%s", e)
    return 1


if __name__ == "__main__":
    sys.exit(main())
