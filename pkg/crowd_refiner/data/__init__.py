"""
Data package: synthetic scenes, annotation documents, images and samples.

Components:
    - rng: SplitMix64 generator
    - synthetic: SceneConfig, gen_synthetic
    - augment: augment_crop_resize
    - annotations: load_annotations, save_annotations
    - pnm: binary PGM/PPM reading and writing
    - dataset: Sample, Dataset
"""

from .rng import SplitMix64, derive_seed
from .synthetic import SceneConfig, gen_synthetic, render_scene
from .augment import augment_crop_resize, CROP_RANGE
from .annotations import load_annotations, parse_annotations, save_annotations
from .pnm import read_pnm, write_pnm, render_heat
from .dataset import Sample, Dataset

__all__ = [
    'SplitMix64',
    'derive_seed',
    'SceneConfig',
    'gen_synthetic',
    'render_scene',
    'augment_crop_resize',
    'CROP_RANGE',
    'load_annotations',
    'parse_annotations',
    'save_annotations',
    'read_pnm',
    'write_pnm',
    'render_heat',
    'Sample',
    'Dataset',
]
