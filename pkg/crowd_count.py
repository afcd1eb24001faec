"""
Main script for the crowd counting command line.

This script is the entry point of the tool. Environment variables (for
example ``DRSAN_THREADS``) are read from a ``.env`` file when present.

Example:
    Render a small synthetic dataset, train on it and evaluate:
        $ python crowd_count.py gen-data --count 8 --seed 7 --out data/synth
        $ python crowd_count.py train --data data/synth --n 4 --iters 2000 --out runs/a
        $ python crowd_count.py eval --checkpoint runs/a/model.drsn --data data/synth --n 4

    Check gradients:
        $ python crowd_count.py gradcheck
"""

import sys

from crowd_refiner.cli import main

if __name__ == "__main__":
    sys.exit(main())
