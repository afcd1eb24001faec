"""
Unit tests for annotation document parsing and writing.
"""

import os
import shutil
import tempfile
import unittest

from crowd_refiner.data import load_annotations, parse_annotations, save_annotations
from crowd_refiner.density import Annotation
from crowd_refiner.validators.base.error_handler import AnnotationError, AnnotationParseError


class TestParseAnnotations(unittest.TestCase):
    """Test cases for parse_annotations."""

    def test_valid_document(self):
        text = '[{"image": "a.pgm", "width": 8, "height": 6, "points": [[1, 2.5], [7.9, 0]]}]'
        anns = parse_annotations(text)
        self.assertEqual(len(anns), 1)
        self.assertEqual(anns[0].image_id, "a.pgm")
        self.assertEqual(anns[0].points, [(1.0, 2.5), (7.9, 0.0)])
        self.assertEqual((anns[0].height, anns[0].width), (6, 8))

    def test_empty_list(self):
        self.assertEqual(parse_annotations("[]"), [])

    def test_syntax_error_position(self):
        text = '[\n  {"image": "a.pgm",, "width": 8}\n]'
        with self.assertRaises(AnnotationParseError) as ctx:
            parse_annotations(text, "doc.json")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 21)
        self.assertTrue(str(ctx.exception).startswith("doc.json:2:21:"))

    def test_schema_error_points_at_entry(self):
        text = ('[\n'
                '  {"image": "a.pgm", "width": 8, "height": 8, "points": []},\n'
                '  {"image": "b.pgm", "width": 8, "height": 8}\n'
                ']')
        with self.assertRaises(AnnotationParseError) as ctx:
            parse_annotations(text, "doc.json")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (3, 3))
        self.assertIn("points", str(ctx.exception))

    def test_top_level_must_be_list(self):
        with self.assertRaises(AnnotationParseError) as ctx:
            parse_annotations('  {"image": "a.pgm"}')
        self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 3))
        self.assertIn("top-level value must be a list", str(ctx.exception))

    def test_bad_point(self):
        text = '[{"image": "a.pgm", "width": 8, "height": 8, "points": [[1, 2, 3]]}]'
        with self.assertRaises(AnnotationParseError):
            parse_annotations(text)

    def test_non_positive_extent(self):
        text = '[{"image": "a.pgm", "width": 0, "height": 8, "points": []}]'
        with self.assertRaises(AnnotationParseError):
            parse_annotations(text)

    def test_point_outside_image(self):
        text = '[{"image": "a.pgm", "width": 8, "height": 8, "points": [[8, 1]]}]'
        with self.assertRaises(AnnotationError) as ctx:
            parse_annotations(text)
        self.assertIn("a.pgm", str(ctx.exception))


class TestAnnotationFiles(unittest.TestCase):
    """Test cases for load_annotations and save_annotations."""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_save_then_load(self):
        path = os.path.join(self.test_dir, "nested", "annotations.json")
        anns = [
            Annotation("images/img_0000.pgm", [(1.25, 3.0), (0.1, 0.2)], height=16, width=24),
            Annotation("images/img_0001.pgm", [], height=16, width=24),
        ]
        save_annotations(path, anns)
        self.assertEqual(load_annotations(path), anns)

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load_annotations(os.path.join(self.test_dir, "absent.json"))


if __name__ == '__main__':
    unittest.main()
