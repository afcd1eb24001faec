"""
Tests that requirements.txt lists only packages the tree uses.
"""

import os
import re
import unittest

ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# distribution name -> module imported by the package
IMPORT_NAMES = {'numpy': 'numpy', 'scipy': 'scipy', 'python-dotenv': 'dotenv'}
TEST_TOOLS = {'pytest', 'pytest-cov'}


def requirement_names():
    names = []
    with open(os.path.join(ROOT, 'requirements.txt'), encoding='utf-8') as f:
        for line in f:
            line = line.split('#', 1)[0].strip()
            if line:
                names.append(re.split(r'[<>=!~\[ ]', line, maxsplit=1)[0].lower())
    return names


def imported_modules():
    modules = set()
    pattern = re.compile(r'^\s*(?:from|import)\s+([A-Za-z_][\w]*)', re.MULTILINE)
    for folder, _, files in os.walk(os.path.join(ROOT, 'crowd_refiner')):
        for name in files:
            if name.endswith('.py'):
                with open(os.path.join(folder, name), encoding='utf-8') as f:
                    modules.update(pattern.findall(f.read()))
    return modules


class TestRequirements(unittest.TestCase):
    """Every listed package is imported by the package or is a test tool."""

    def test_no_unused_requirements(self):
        modules = imported_modules()
        for name in requirement_names():
            with self.subTest(requirement=name):
                if name in TEST_TOOLS:
                    continue
                self.assertIn(name, IMPORT_NAMES, "unknown requirement")
                self.assertIn(IMPORT_NAMES[name], modules)

    def test_runtime_imports_are_listed(self):
        names = requirement_names()
        for dist in IMPORT_NAMES:
            self.assertIn(dist, names)


if __name__ == '__main__':
    unittest.main()
