"""
Affine transform parameterization and closed-form inversion.

An attention glimpse is described by a 2x3 matrix acting on normalized
coordinates, where both axes of a map span [-1, 1]. The predictor emits
unconstrained scalars; ``compose_transform`` squashes them into bounded
scale, free angle and bounded translation, then builds the matrix. The
constraint mode fixes entries exactly:

    T       scale 1, no rotation   -> theta = [[1, 0, tx], [0, 1, ty]]
    T+S     no rotation            -> theta = [[sx, 0, tx], [0, sy, ty]]
    T+S+R   full                   -> theta = [[sx cos, -sy sin, tx], [sx sin, sy cos, ty]]
    RAW     six scalars used directly as theta

Example:
    >>> t = compose_transform(Tensor(np.zeros(5)), TransformMode.TSR)
    >>> round(t.params().sx, 6)
    0.6
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..tensor_core import Function, Tensor, as_tensor
from ..validators.base.error_handler import ConfigError, DimensionError, ErrorFormatter, SingularTransformError

logger = logging.getLogger(__name__)

_formatter = ErrorFormatter()

DEFAULT_S_MIN = 0.2
SINGULAR_DET = 1e-6


class TransformMode(str, Enum):
    """Constraint applied to the predicted transform."""

    T = 'T'
    TS = 'T+S'
    TSR = 'T+S+R'
    RAW = 'RAW'

    @property
    def raw_size(self) -> int:
        """Number of unconstrained scalars the predictor must emit."""
        return 6 if self is TransformMode.RAW else 5

    @classmethod
    def parse(cls, name: str) -> "TransformMode":
        """Accept both the table names (``T+S``) and the flag names (``ts``)."""
        aliases = {'t': cls.T, 'ts': cls.TS, 'tsr': cls.TSR, 'raw': cls.RAW}
        key = name.strip()
        if key.lower() in aliases:
            return aliases[key.lower()]
        for mode in cls:
            if mode.value == key.upper():
                return mode
        raise ConfigError(
            _formatter.format_invalid_value_error(name, "mode", "expected one of t, ts, tsr, raw")
        )


@dataclass
class TransformParams:
    """Structured view of a transform.

    Attributes:
        sx (float): Horizontal scale in [s_min, 1].
        sy (float): Vertical scale in [s_min, 1].
        phi (float): Rotation angle in radians.
        tx (float): Horizontal translation in [-1, 1].
        ty (float): Vertical translation in [-1, 1].
    """

    sx: float
    sy: float
    phi: float
    tx: float
    ty: float


@dataclass
class AffineTransform:
    """A 2x3 affine matrix in normalized coordinates plus its constraint mode.

    Attributes:
        theta (Tensor): Matrix of shape (2, 3), possibly part of a graph.
        mode (TransformMode): Constraint the matrix was built under.
        raw (Optional[np.ndarray]): Predictor output the matrix came from.
    """

    theta: Tensor
    mode: TransformMode = TransformMode.RAW
    raw: Optional[np.ndarray] = None

    @classmethod
    def from_matrix(cls, matrix, mode: TransformMode = TransformMode.RAW) -> "AffineTransform":
        """Wrap a constant 2x3 matrix (nested lists or array)."""
        theta = as_tensor(np.asarray(matrix, dtype=float))
        if theta.shape != (2, 3):
            raise DimensionError(_formatter.format_dimension_error("AffineTransform", "theta", theta.size, "2x3"))
        return cls(theta, mode)

    @classmethod
    def identity(cls) -> "AffineTransform":
        return cls.from_matrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    @property
    def matrix(self) -> np.ndarray:
        return self.theta.data

    def determinant(self) -> float:
        m = self.theta.data
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def augmented(self) -> np.ndarray:
        """3x3 matrix with ``[0, 0, 1]`` appended as the last row."""
        return np.vstack([self.theta.data, [0.0, 0.0, 1.0]])

    def params(self) -> TransformParams:
        """Recover (sx, sy, phi, tx, ty) from the matrix."""
        m = self.theta.data
        sx = float(np.hypot(m[0, 0], m[1, 0]))
        sy = float(np.hypot(m[0, 1], m[1, 1]))
        phi = float(np.arctan2(m[1, 0], m[0, 0]))
        return TransformParams(sx, sy, phi, float(m[0, 2]), float(m[1, 2]))

    def to_dict(self) -> dict:
        return {'mode': self.mode.value, 'theta': self.theta.data.tolist()}


class ComposeTheta(Function):
    """Squash unconstrained predictor output into a constrained 2x3 matrix."""

    def forward(self, raw: np.ndarray, mode: TransformMode = TransformMode.TSR,
                s_min: float = DEFAULT_S_MIN) -> np.ndarray:
        r = raw.reshape(-1)
        if r.size != mode.raw_size:
            raise DimensionError(_formatter.format_dimension_error("compose_transform", "raw", r.size, mode.raw_size))
        self.raw_shape, self.mode, self.s_min = raw.shape, mode, s_min
        if mode is TransformMode.RAW:
            return r.reshape(2, 3).copy()

        self.sig = 1.0 / (1.0 + np.exp(-r[0:2]))
        sx, sy = s_min + (1.0 - s_min) * self.sig
        phi = r[2]
        tx, ty = np.tanh(r[3:5])
        self.sx, self.sy, self.phi, self.tx, self.ty = sx, sy, phi, tx, ty

        if mode is TransformMode.T:
            rows = [[1.0, 0.0, tx], [0.0, 1.0, ty]]
        elif mode is TransformMode.TS:
            rows = [[sx, 0.0, tx], [0.0, sy, ty]]
        else:
            c, s = np.cos(phi), np.sin(phi)
            rows = [[sx * c, -sy * s, tx], [sx * s, sy * c, ty]]
        return np.array(rows, dtype=raw.dtype)

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        if self.mode is TransformMode.RAW:
            return (grad.reshape(self.raw_shape),)
        g = np.zeros(5, dtype=grad.dtype)
        g[3] = grad[0, 2] * (1.0 - self.tx * self.tx)
        g[4] = grad[1, 2] * (1.0 - self.ty * self.ty)
        if self.mode is not TransformMode.T:
            if self.mode is TransformMode.TS:
                d_sx, d_sy, d_phi = grad[0, 0], grad[1, 1], 0.0
            else:
                c, s = np.cos(self.phi), np.sin(self.phi)
                d_sx = grad[0, 0] * c + grad[1, 0] * s
                d_sy = -grad[0, 1] * s + grad[1, 1] * c
                d_phi = (-grad[0, 0] * self.sx * s - grad[0, 1] * self.sy * c
                         + grad[1, 0] * self.sx * c - grad[1, 1] * self.sy * s)
            slope = (1.0 - self.s_min) * self.sig * (1.0 - self.sig)
            g[0] = d_sx * slope[0]
            g[1] = d_sy * slope[1]
            g[2] = d_phi
        return (g.reshape(self.raw_shape),)


class InvertAffine(Function):
    """Closed-form inverse of a 2x3 affine matrix."""

    def forward(self, theta: np.ndarray) -> np.ndarray:
        (a11, a12, a13), (a21, a22, a23) = theta
        det = a11 * a22 - a12 * a21
        if abs(det) < SINGULAR_DET:
            raise SingularTransformError(
                f"Affine transform is singular: |det| = {abs(det):.3e} < {SINGULAR_DET:g}", float(det)
            )
        r = 1.0 / det
        inv = r * np.array([
            [a22, -a12, a12 * a23 - a13 * a22],
            [-a21, a11, a13 * a21 - a11 * a23],
        ], dtype=theta.dtype)
        self.b = inv[:, :2]
        self.t = theta[:, 2]
        return inv

    def backward(self, grad: np.ndarray) -> Tuple[np.ndarray]:
        g_b = grad[:, :2]
        g_t_inv = grad[:, 2]
        # t_inv = -B t, B = A^-1
        g_t = -self.b.T @ g_t_inv
        g_b_total = g_b - np.outer(g_t_inv, self.t)
        g_a = -self.b.T @ g_b_total @ self.b.T
        return (np.hstack([g_a, g_t[:, None]]),)


def compose_transform(raw: Tensor, mode: TransformMode, s_min: float = DEFAULT_S_MIN) -> AffineTransform:
    """Build a constrained transform from unconstrained predictor output.

    Args:
        raw (Tensor): Five scalars (sx~, sy~, phi~, tx~, ty~) for the
            structured modes or six for RAW; any leading shape is flattened.
        mode (TransformMode): Constraint to apply.
        s_min (float): Lower bound of the scale range.

    Returns:
        AffineTransform: The composed transform, differentiable in ``raw``.
    """
    raw = as_tensor(raw)
    theta = ComposeTheta.apply(raw, mode=mode, s_min=s_min)
    return AffineTransform(theta, mode, raw.data.reshape(-1).copy())


def invert_affine(transform: AffineTransform) -> AffineTransform:
    """Invert a transform in closed form.

    Raises:
        SingularTransformError: If |det| < 1e-6; carries the determinant.
    """
    return AffineTransform(InvertAffine.apply(transform.theta), transform.mode)
