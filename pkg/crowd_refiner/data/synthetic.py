"""
Seeded synthetic crowd scenes.

Each scene is a dark canvas with bright elliptical "heads". Heads shrink
toward the top of the scene (perspective) and the whole scene is rotated by
a per-image angle, so both the blob orientation and the perspective axis
turn with it. Blobs keep a minimum gap so that every head is its own
connected component in the noise-free render, and the annotation point of
a head is the center of its blob.

Images are generated independently from per-image seeds ``seed ^ index``
and can therefore be produced by a pool of workers in any order.

Example:
    >>> images, anns = gen_synthetic(SceneConfig(seed=7), 2)
    >>> images[0].shape, anns[0].count >= 1
    ((64, 64), True)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from ..density import Annotation
from ..model.params import MAP_STRIDE
from ..path_manager import PathManager
from ..validators.base.error_handler import ConfigError, ErrorFormatter
from .rng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

ASPECT = 1.6
GAP = 2.0
BACKGROUND = 0.0
FOREGROUND = 1.0
PLACEMENT_TRIES = 200
_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass
class SceneConfig:
    """Parameters of the synthetic scene generator.

    Attributes:
        height (int): Canvas rows, divisible by 8.
        width (int): Canvas columns, divisible by 8.
        count_min (int): Fewest heads requested per scene, >= 1.
        count_max (int): Most heads requested per scene.
        radius_min (float): Smallest head radius at the bottom of a scene.
        radius_max (float): Largest head radius at the bottom of a scene.
        perspective (float): In [0, 1); heads at the top are scaled by
            ``1 - perspective``.
        rotation (float): Scene angles are drawn from [-rotation, rotation]
            degrees.
        noise (float): Standard deviation of additive background noise.
        channels (int): 1 for grayscale, 3 for a replicated RGB image.
        seed (int): Base seed.
    """

    height: int = 64
    width: int = 64
    count_min: int = 5
    count_max: int = 25
    radius_min: float = 1.5
    radius_max: float = 3.0
    perspective: float = 0.5
    rotation: float = 30.0
    noise: float = 0.05
    channels: int = 1
    seed: int = 7

    def __post_init__(self):
        if self.count_min < 1 or self.count_max < self.count_min:
            raise ConfigError(_formatter.format_invalid_value_error(
                (self.count_min, self.count_max), "count range", "need 1 <= count_min <= count_max"))
        if self.radius_min <= 0 or self.radius_max < self.radius_min:
            raise ConfigError(_formatter.format_invalid_value_error(
                (self.radius_min, self.radius_max), "radius range", "need 0 < radius_min <= radius_max"))
        for name in ('height', 'width'):
            extent = getattr(self, name)
            if extent <= 0 or extent % MAP_STRIDE:
                raise ConfigError(
                    _formatter.format_invalid_value_error(extent, name, f"must be a positive multiple of {MAP_STRIDE}")
                )
        if not 0.0 <= self.perspective < 1.0:
            raise ConfigError(_formatter.format_invalid_value_error(self.perspective, "perspective", "must lie in [0, 1)"))
        if self.noise < 0:
            raise ConfigError(_formatter.format_invalid_value_error(self.noise, "noise", "must be >= 0"))
        if self.channels not in (1, 3):
            raise ConfigError(_formatter.format_invalid_value_error(self.channels, "channels", "expected 1 or 3"))


@dataclass
class Head:
    """One rendered head: center, minor radius and orientation."""

    x: float
    y: float
    radius: float
    angle: float


def _place_heads(cfg: SceneConfig, rng: SplitMix64) -> Tuple[List[Head], float]:
    target = rng.randint(cfg.count_min, cfg.count_max)
    angle = math.radians(rng.uniform(-cfg.rotation, cfg.rotation)) if cfg.rotation > 0 else 0.0
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    cx, cy = cfg.width / 2.0, cfg.height / 2.0
    heads: List[Head] = []

    for _ in range(target):
        for _ in range(PLACEMENT_TRIES):
            # scene frame: v runs from the top (0) to the bottom (1)
            u = rng.uniform(-0.5, 0.5)
            v = rng.uniform(0.0, 1.0)
            scale = 1.0 - cfg.perspective * (1.0 - v)
            radius = max(1.0, rng.uniform(cfg.radius_min, cfg.radius_max) * scale)
            du, dv = u * cfg.width, (v - 0.5) * cfg.height
            x = cx + du * cos_a - dv * sin_a
            y = cy + du * sin_a + dv * cos_a
            reach = ASPECT * radius + 1.0
            if not (reach <= x <= cfg.width - reach and reach <= y <= cfg.height - reach):
                continue
            if any(math.hypot(x - h.x, y - h.y) <= ASPECT * (radius + h.radius) + GAP for h in heads):
                continue
            heads.append(Head(x, y, radius, angle))
            break
    if len(heads) < target:
        logger.debug("placed %d of %d requested heads", len(heads), target)
    return heads, angle


def render_heads(heads: List[Head], height: int, width: int) -> np.ndarray:
    """Noise-free binary render: FOREGROUND inside any head, BACKGROUND elsewhere."""
    canvas = np.full((height, width), BACKGROUND, dtype=np.float64)
    for head in heads:
        reach = ASPECT * head.radius + 1.0
        col0, col1 = max(int(head.x - reach), 0), min(int(math.ceil(head.x + reach)) + 1, width)
        row0, row1 = max(int(head.y - reach), 0), min(int(math.ceil(head.y + reach)) + 1, height)
        dx = np.arange(col0, col1) + 0.5 - head.x
        dy = np.arange(row0, row1) + 0.5 - head.y
        dx, dy = np.meshgrid(dx, dy)
        cos_a, sin_a = math.cos(head.angle), math.sin(head.angle)
        # local frame: minor axis along the rotated x axis, major along rotated y
        along_x = dx * cos_a + dy * sin_a
        along_y = -dx * sin_a + dy * cos_a
        inside = (along_x / head.radius) ** 2 + (along_y / (ASPECT * head.radius)) ** 2 <= 1.0
        # thin tips can rasterize into stray pixels; keep the part holding the center
        labels, _ = ndimage.label(inside, structure=_EIGHT_CONNECTED)
        center = labels[int(head.y) - row0, int(head.x) - col0]
        canvas[row0:row1, col0:col1][labels == center] = FOREGROUND
    return canvas


def render_scene(cfg: SceneConfig, index: int) -> Tuple[np.ndarray, Annotation, List[Head]]:
    """Render scene ``index`` of the configured suite.

    Returns:
        Tuple[np.ndarray, Annotation, List[Head]]: Image in [0, 1] of shape
        (H, W) or (H, W, 3), its annotation and the rendered heads.
    """
    rng = SplitMix64(derive_seed(cfg.seed, index))
    heads, _ = _place_heads(cfg, rng)
    image = render_heads(heads, cfg.height, cfg.width)
    if cfg.noise > 0:
        noise = np.array([rng.normal() for _ in range(image.size)]).reshape(image.shape)
        image = np.clip(image + cfg.noise * noise, 0.0, 1.0)
    if cfg.channels == 3:
        image = np.repeat(image[:, :, None], 3, axis=2)
    extension = '.pgm' if cfg.channels == 1 else '.ppm'
    ann = Annotation(
        image_id=PathManager().relative_image_path(index, extension),
        points=[(h.x, h.y) for h in heads],
        height=cfg.height,
        width=cfg.width,
    )
    return image, ann, heads


def gen_synthetic(cfg: SceneConfig, count: int,
                  workers: Optional[int] = None) -> Tuple[List[np.ndarray], List[Annotation]]:
    """Generate ``count`` scenes, deterministic per seed.

    Args:
        cfg (SceneConfig): Generator parameters.
        count (int): Number of images.
        workers (Optional[int]): Worker threads; results are returned in
            index order regardless of the count.

    Returns:
        Tuple[List[np.ndarray], List[Annotation]]: Images and annotations.
    """
    workers = max(1, workers or 1)
    if workers == 1:
        scenes = [render_scene(cfg, i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            scenes = list(pool.map(lambda i: render_scene(cfg, i), range(count)))
    logger.info("generated %d synthetic scene(s) with seed %d", count, cfg.seed)
    return [s[0] for s in scenes], [s[1] for s in scenes]
