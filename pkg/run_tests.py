"""
Test runner script for the crowd counter.

Discovers and runs every ``test_*.py`` below ``tests``. The slow acceptance
runs in ``tests/acceptance`` are skipped unless ``CROWD_REFINER_SLOW=1``.

Usage:
    Run all fast tests:
        $ python run_tests.py

    Include the acceptance runs:
        $ CROWD_REFINER_SLOW=1 python run_tests.py
"""

import unittest


def main() -> None:
    """Execute all project test cases.

    The tests are organized by area:
    - tensor_core, stn, density, model: numerics and gradients
    - data, checkpoint, config, validators: file formats and settings
    - training, evaluation, cli: loops, metrics and commands
    - packaging: requirements match the imports
    - acceptance: end-to-end properties (slow, opt-in)
    """
    unittest.main(module=None, argv=["unittest", "discover", "-s", "tests", "-t", "."])


if __name__ == "__main__":
    main()
