"""Block rotation with bicubic resampling.

Coordinates are Cartesian (x = column, y = row); image[y, x] is the
sample at integer (x, y). Rotating a block by angle t maps an edge whose
tangent runs at t degrees from the x-axis onto a horizontal edge, which
is the alignment the angle estimators are calibrated to.

A rotated 8x8 block is sampled into a square "extended" block whose
side and sampling step depend on the strategy: constant sampling rate
keeps unit step and grows the side up to 12; constant block size keeps
a fixed side and stretches the step to cover the rotated footprint.
Every extended-block entry, corners included, is a bicubic sample of
the full source image, so no entry is ever synthetic fill.

The batched helpers run the same per-element arithmetic as the scalar
ops (shared kernel code), so whole-image passes are bit-identical to
per-block calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .imageio import BLOCK_SIZE, GrayImage

# Keys cubic convolution kernel, a = -0.5. Fixed: the kernel is part of
# the bitstream contract.
_KEYS_A = -0.5


class StrategyKind(Enum):
    CONSTANT_SAMPLING_RATE = "constant-sampling-rate"
    CONSTANT_BLOCK_SIZE = "constant-block-size"


@dataclass(frozen=True)
class RotationStrategy:
    kind: StrategyKind
    fixed_side: int = BLOCK_SIZE

    def __post_init__(self):
        if self.kind is StrategyKind.CONSTANT_BLOCK_SIZE and self.fixed_side not in (8, 12):
            raise ValueError(f"constant-block-size side must be 8 or 12, got {self.fixed_side}")


CONST_RATE = RotationStrategy(StrategyKind.CONSTANT_SAMPLING_RATE)
CONST_SIZE_8 = RotationStrategy(StrategyKind.CONSTANT_BLOCK_SIZE, 8)
CONST_SIZE_12 = RotationStrategy(StrategyKind.CONSTANT_BLOCK_SIZE, 12)


@dataclass(frozen=True)
class BlockContext:
    """Locates one 8x8 source block within its image."""

    image: GrayImage
    block_row: int
    block_col: int

    def __post_init__(self):
        down = -(-self.image.height // BLOCK_SIZE)
        across = -(-self.image.width // BLOCK_SIZE)
        if not (0 <= self.block_row < down and 0 <= self.block_col < across):
            raise ValueError(
                f"block ({self.block_row}, {self.block_col}) outside {down}x{across} grid"
            )

    @property
    def center_x(self) -> float:
        return self.block_col * BLOCK_SIZE + (BLOCK_SIZE - 1) / 2.0

    @property
    def center_y(self) -> float:
        return self.block_row * BLOCK_SIZE + (BLOCK_SIZE - 1) / 2.0

    def source_block(self) -> np.ndarray:
        """The 8x8 block, edge-replicated past the image border if needed."""
        h, w = self.image.height, self.image.width
        rows = np.minimum(np.arange(BLOCK_SIZE) + self.block_row * BLOCK_SIZE, h - 1)
        cols = np.minimum(np.arange(BLOCK_SIZE) + self.block_col * BLOCK_SIZE, w - 1)
        return self.image.pixels[np.ix_(rows, cols)].copy()


@dataclass(frozen=True)
class ExtendedBlock:
    """A rotated, resampled block plus the metadata needed to undo it."""

    block: np.ndarray  # (side, side) float64
    angle_deg: float
    strategy: RotationStrategy
    source_side: int = BLOCK_SIZE

    def __post_init__(self):
        expected = output_side(self.strategy, self.angle_deg)
        if self.block.shape != (expected, expected):
            raise ValueError(
                f"extended block shape {self.block.shape} does not match "
                f"side {expected} for angle {self.angle_deg} and {self.strategy.kind.value}"
            )

    @property
    def side(self) -> int:
        return self.block.shape[0]


def _check_angle(angle_deg: float) -> float:
    angle_deg = float(angle_deg)
    if not 0.0 <= angle_deg < 90.0:
        raise ValueError(f"angle must lie in [0, 90), got {angle_deg}")
    return angle_deg


def extended_side(angle_deg: float) -> int:
    """Side of the square enclosing an 8x8 block rotated by angle_deg.

    ceil(8 (cos t + sin t)); 8 at 0 degrees, peaking at 12 for 45.
    """
    t = math.radians(_check_angle(angle_deg))
    return math.ceil(BLOCK_SIZE * (math.cos(t) + math.sin(t)))


def output_side(strategy: RotationStrategy, angle_deg: float) -> int:
    if strategy.kind is StrategyKind.CONSTANT_SAMPLING_RATE:
        return extended_side(angle_deg)
    return strategy.fixed_side


def sampling_scale(strategy: RotationStrategy, angle_deg: float) -> float:
    """Source-sample spacing covered by one output step.

    1 for constant sampling rate. For constant block size the rotated
    footprint 8 (cos t + sin t) is squeezed into the fixed side, so the
    step exceeds 1 for side 8 (up to sqrt(2) at 45 degrees, a ~29.3%
    sampling-rate loss) and sits below 1 for side 12.
    """
    angle_deg = _check_angle(angle_deg)
    if strategy.kind is StrategyKind.CONSTANT_SAMPLING_RATE:
        return 1.0
    t = math.radians(angle_deg)
    return BLOCK_SIZE * (math.cos(t) + math.sin(t)) / strategy.fixed_side


def _cubic_weights(frac: np.ndarray):
    """Keys (a=-0.5) weights for taps at offsets -1..2 around the floor cell."""
    f = frac
    f2 = f * f
    f3 = f2 * f
    w0 = -0.5 * (f3 - 2.0 * f2 + f)
    w1 = 1.5 * f3 - 2.5 * f2 + 1.0
    w2 = -1.5 * f3 + 2.0 * f2 + 0.5 * f
    w3 = 0.5 * (f3 - f2)
    return w0, w1, w2, w3


def bicubic_sample(field: np.ndarray, x, y):
    """Keys bicubic interpolation of a 2D field with clamp-to-edge extension.

    x and y may be scalars or arrays (broadcast together); the result has
    the broadcast shape. Integer coordinates reproduce grid values exactly
    and degree-1 fields are reproduced exactly away from the clamp region.
    """
    field = np.asarray(field, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x, y = np.broadcast_arrays(x, y)
    h, w = field.shape

    x0 = np.floor(x)
    y0 = np.floor(y)
    wx = _cubic_weights(x - x0)
    wy = _cubic_weights(y - y0)
    ix0 = x0.astype(np.intp) - 1
    iy0 = y0.astype(np.intp) - 1

    acc = np.zeros(x.shape, dtype=np.float64)
    for ky in range(4):
        iy = np.clip(iy0 + ky, 0, h - 1)
        for kx in range(4):
            ix = np.clip(ix0 + kx, 0, w - 1)
            acc = acc + (wy[ky] * wx[kx]) * field[iy, ix]
    if acc.ndim == 0:
        return float(acc)
    return acc


def _bicubic_sample_stack(fields: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """bicubic_sample of one coordinate set over a (B, H, W) stack of fields.

    Returns (B, *coords.shape); per-element arithmetic matches
    bicubic_sample on each field individually.
    """
    fields = np.asarray(fields, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x, y = np.broadcast_arrays(x, y)
    _, h, w = fields.shape

    x0 = np.floor(x)
    y0 = np.floor(y)
    wx = _cubic_weights(x - x0)
    wy = _cubic_weights(y - y0)
    ix0 = x0.astype(np.intp) - 1
    iy0 = y0.astype(np.intp) - 1

    acc = np.zeros((fields.shape[0],) + x.shape, dtype=np.float64)
    for ky in range(4):
        iy = np.clip(iy0 + ky, 0, h - 1)
        for kx in range(4):
            ix = np.clip(ix0 + kx, 0, w - 1)
            acc = acc + (wy[ky] * wx[kx]) * fields[:, iy, ix]
    return acc


def _output_offsets(angle_deg: float, strategy: RotationStrategy):
    """Source-coordinate offsets (dx, dy), each (S, S) indexed [row, col]."""
    side = output_side(strategy, angle_deg)
    scale = sampling_scale(strategy, angle_deg)
    half = (side - 1) / 2.0
    du = np.arange(side, dtype=np.float64) - half  # along x (columns)
    dv = du[:, None]  # along y (rows)
    t = math.radians(angle_deg)
    cos_t, sin_t = math.cos(t), math.sin(t)
    dx = scale * (cos_t * du[None, :] - sin_t * dv)
    dy = scale * (sin_t * du[None, :] + cos_t * dv)
    return dx, dy


def _is_identity_geometry(angle_deg: float, strategy: RotationStrategy) -> bool:
    return angle_deg == 0.0 and output_side(strategy, angle_deg) == BLOCK_SIZE


def _rotate_stack(
    pixels: np.ndarray,
    centers_x: np.ndarray,
    centers_y: np.ndarray,
    angle_deg: float,
    strategy: RotationStrategy,
) -> np.ndarray:
    """Extended blocks (B, S, S) for blocks centered at the given coordinates.

    At zero angle with unit scale and side 8 no resampling happens: the
    blocks are copied sample-for-sample (clamped at the image border).
    """
    angle_deg = _check_angle(angle_deg)
    centers_x = np.atleast_1d(np.asarray(centers_x, dtype=np.float64))
    centers_y = np.atleast_1d(np.asarray(centers_y, dtype=np.float64))
    h, w = pixels.shape

    if _is_identity_geometry(angle_deg, strategy):
        x0 = np.rint(centers_x - (BLOCK_SIZE - 1) / 2.0).astype(np.intp)
        y0 = np.rint(centers_y - (BLOCK_SIZE - 1) / 2.0).astype(np.intp)
        cols = np.clip(x0[:, None, None] + np.arange(BLOCK_SIZE)[None, None, :], 0, w - 1)
        rows = np.clip(y0[:, None, None] + np.arange(BLOCK_SIZE)[None, :, None], 0, h - 1)
        return pixels[rows, cols]

    dx, dy = _output_offsets(angle_deg, strategy)
    xs = centers_x[:, None, None] + dx[None, :, :]
    ys = centers_y[:, None, None] + dy[None, :, :]
    return bicubic_sample(pixels, xs, ys)


def rotate_block(ctx: BlockContext, angle_deg: float, strategy: RotationStrategy) -> ExtendedBlock:
    """Rotate one 8x8 block into its extended block.

    Every output sample is drawn from the full source image by inverse
    mapping, so the rhombus corners carry real (rotated) image content;
    coordinates past the image border clamp to the edge.
    """
    block = _rotate_stack(
        ctx.image.pixels, [ctx.center_x], [ctx.center_y], angle_deg, strategy
    )[0]
    return ExtendedBlock(block, float(angle_deg), strategy)


def _derotate_stack(
    recons: np.ndarray, angle_deg: float, strategy: RotationStrategy
) -> np.ndarray:
    """Central 8x8 footprints (B, 8, 8) of rotated-back extended blocks."""
    angle_deg = _check_angle(angle_deg)
    recons = np.asarray(recons, dtype=np.float64)
    if recons.ndim != 3:
        raise ValueError(f"expected a (B, S, S) stack, got shape {recons.shape}")

    if _is_identity_geometry(angle_deg, strategy):
        return recons

    side = recons.shape[-1]
    scale = sampling_scale(strategy, angle_deg)
    half_out = (side - 1) / 2.0
    d = np.arange(BLOCK_SIZE, dtype=np.float64) - (BLOCK_SIZE - 1) / 2.0
    dxf = d[None, :]  # footprint x offsets (columns)
    dyf = d[:, None]  # footprint y offsets (rows)
    t = math.radians(angle_deg)
    cos_t, sin_t = math.cos(t), math.sin(t)
    us = half_out + (cos_t * dxf + sin_t * dyf) / scale
    vs = half_out + (-sin_t * dxf + cos_t * dyf) / scale
    return _bicubic_sample_stack(recons, us, vs)


def derotate_block(decoded: ExtendedBlock) -> np.ndarray:
    """Rotate a decoded extended block back and crop the 8x8 footprint.

    Uses only the extended block itself (clamp-to-edge), mirroring what a
    decoder can do without access to the source image.
    """
    return _derotate_stack(decoded.block[None], decoded.angle_deg, decoded.strategy)[0]
