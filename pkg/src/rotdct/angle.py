"""Per-block rotation-angle estimation.

Two estimators:

* exhaustive: tries every angle on a grid over [0, 90) and keeps the one
  whose truncated-transform reconstruction has the lowest mean squared
  error on the original 8x8 footprint. The candidate reconstruction is
  the exact decoder chain (float32-quantized kept coefficients, output
  clamped to [0, 255]), so the winning angle's error equals the block's
  contribution to the decoded image. 0 degrees is always on the grid and
  its path is resampling-free, which makes the rotated codec's quality
  dominate the standard one by construction.

* histogram: folds per-pixel gradient orientations into [0, 90), builds
  a 90-bin magnitude-weighted histogram, smooths it circularly and
  returns the strongest bin. Cheap, approximate.

All stack helpers run per-element arithmetic identical to the scalar
ops, so batched estimation is bit-identical to per-block estimation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry, transform
from .geometry import BlockContext, RotationStrategy
from .imageio import BLOCK_SIZE

HISTOGRAM_BINS = 90
DEFAULT_SMOOTH_WIDTH = 5

# A candidate angle must beat the incumbent by more than this (squared-
# sample units) to win. Real gains are many orders larger; float noise
# in near-exact reconstructions is many orders smaller. Without the
# margin, blocks where rotation cannot help (constants, flat patches)
# would pick an arbitrary noise-minimizing angle instead of 0.
MSE_TIE_EPSILON = 1e-12


@dataclass(frozen=True)
class AngleSearchConfig:
    """Grid and operating point for the exhaustive search."""

    n_for_selection: int
    strategy: RotationStrategy
    step_deg: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.step_deg <= 45.0:
            raise ValueError(f"step must lie in (0, 45], got {self.step_deg}")
        if not 1 <= self.n_for_selection <= BLOCK_SIZE * BLOCK_SIZE:
            raise ValueError(f"n_for_selection must lie in [1, 64], got {self.n_for_selection}")


@dataclass(frozen=True)
class AngleDecision:
    angle_deg: float
    mse: float
    mse_at_zero: float


def angle_grid(step_deg: float) -> np.ndarray:
    """Search angles {0, step, 2 step, ...} restricted to [0, 90)."""
    grid = np.arange(0.0, 90.0, float(step_deg))
    return grid[grid < 90.0]


def block_mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared difference over the 64 positions of two 8x8 blocks."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"block shapes differ: {a.shape} vs {b.shape}")
    if a.shape != (BLOCK_SIZE, BLOCK_SIZE):
        raise ValueError(f"expected 8x8 blocks, got {a.shape}")
    return float(np.mean((a - b) ** 2))


def _truncate_quantized(coeffs: np.ndarray, k: int, order: np.ndarray | None = None) -> np.ndarray:
    """keep_largest with kept values rounded through float32.

    This is the stored-coefficient form: the codec serializes kept values
    as float32, and the angle search must score exactly what the decoder
    will reconstruct. A precomputed selection order may be passed when
    several budgets share one grid.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    side = coeffs.shape[-1]
    if order is None:
        order = transform.selection_order(coeffs)
    order = order[..., :k]
    flat = coeffs.reshape(coeffs.shape[:-2] + (side * side,))
    vals = np.take_along_axis(flat, order, axis=-1)
    vals = vals.astype(np.float32).astype(np.float64)
    out = np.zeros_like(flat)
    np.put_along_axis(out, order, vals, axis=-1)
    return out.reshape(coeffs.shape)


def _decoded_footprints(
    coeffs: np.ndarray,
    angle_deg: float,
    strategy: RotationStrategy,
    k: int,
    order: np.ndarray | None = None,
) -> np.ndarray:
    """Decoder-exact reconstructions (B, 8, 8) from extended-block coefficients."""
    recon = transform.idct2(_truncate_quantized(coeffs, k, order))
    foot = geometry._derotate_stack(recon, angle_deg, strategy)
    return np.clip(foot, 0.0, 255.0)


def reconstruct_at(
    ctx: BlockContext, angle_deg: float, n: int, strategy: RotationStrategy
) -> np.ndarray:
    """Reconstruction of a block: rotate, transform, keep n, invert, rotate back.

    The pure real-valued chain (no storage quantization, no clamping);
    see estimate_angle_exhaustive for the decoder-exact scoring variant.
    """
    ext = geometry.rotate_block(ctx, angle_deg, strategy)
    kept = transform.keep_largest(transform.dct2(ext.block), n)
    recon = transform.idct2(kept)
    return geometry.derotate_block(
        geometry.ExtendedBlock(recon, ext.angle_deg, ext.strategy)
    )


def estimate_angle_exhaustive(ctx: BlockContext, cfg: AngleSearchConfig) -> AngleDecision:
    """Grid-search the angle minimizing footprint MSE at the given budget.

    Ties break toward the smaller angle, so 0 degrees (the cheap,
    resampling-free path) wins whenever rotation does not strictly help.
    """
    src = ctx.source_block()
    best_angle = 0.0
    best_mse = np.inf
    mse_at_zero = np.inf
    for theta in angle_grid(cfg.step_deg):
        theta = float(theta)
        side = geometry.output_side(cfg.strategy, theta)
        k = min(cfg.n_for_selection, side * side)
        ext = geometry.rotate_block(ctx, theta, cfg.strategy)
        coeffs = transform.dct2(ext.block[None])
        foot = _decoded_footprints(coeffs, theta, cfg.strategy, k)[0]
        mse = block_mse(src, foot)
        if theta == 0.0:
            mse_at_zero = mse
        if mse < best_mse - MSE_TIE_EPSILON:
            best_mse = mse
            best_angle = theta
    return AngleDecision(best_angle, best_mse, mse_at_zero)


def gradient_orientation(block: np.ndarray):
    """Per-pixel gradient orientation folded into [0, 90) plus magnitude.

    Central differences with clamp-to-edge at the block boundary; pixels
    with zero gradient report orientation 0 and magnitude 0.
    """
    block = np.asarray(block, dtype=np.float64)
    padded = np.pad(block, 1, mode="edge")
    dx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    dy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    magnitude = np.hypot(dx, dy)
    orientation = np.degrees(np.arctan2(dy, dx)) % 90.0
    # Guard the half-open interval: folding can round to exactly 90.0.
    orientation = np.where(orientation >= 90.0, orientation - 90.0, orientation)
    orientation = np.where(magnitude == 0.0, 0.0, orientation)
    return orientation, magnitude


def gradient_histogram(block: np.ndarray) -> np.ndarray:
    """90-bin histogram of gradient orientations weighted by magnitude."""
    return _gradient_histograms(np.asarray(block, dtype=np.float64)[None])[0]


def _gradient_histograms(blocks: np.ndarray) -> np.ndarray:
    """(B, 90) orientation histograms of a stack of 8x8 blocks."""
    padded = np.pad(blocks, ((0, 0), (1, 1), (1, 1)), mode="edge")
    dx = (padded[:, 1:-1, 2:] - padded[:, 1:-1, :-2]) / 2.0
    dy = (padded[:, 2:, 1:-1] - padded[:, :-2, 1:-1]) / 2.0
    magnitude = np.hypot(dx, dy)
    orientation = np.degrees(np.arctan2(dy, dx)) % 90.0
    bins = np.floor(orientation).astype(np.intp)
    bins[bins >= HISTOGRAM_BINS] -= HISTOGRAM_BINS
    count = blocks.shape[0]
    offsets = np.arange(count, dtype=np.intp)[:, None, None] * HISTOGRAM_BINS
    flat = np.bincount(
        (bins + offsets).ravel(),
        weights=magnitude.ravel(),
        minlength=count * HISTOGRAM_BINS,
    )
    return flat.reshape(count, HISTOGRAM_BINS)


def smooth_histogram(hist: np.ndarray, width: int) -> np.ndarray:
    """Circular (mod 90) moving average; preserves total mass."""
    if width < 1 or width % 2 == 0:
        raise ValueError(f"smoothing width must be an odd positive integer, got {width}")
    hist = np.asarray(hist, dtype=np.float64)
    if width == 1:
        return hist.copy()
    half = width // 2
    acc = np.zeros_like(hist)
    for shift in range(-half, half + 1):
        acc += np.roll(hist, shift, axis=-1)
    return acc / width


def _histogram_angles(blocks: np.ndarray, smooth_width: int) -> np.ndarray:
    smoothed = smooth_histogram(_gradient_histograms(blocks), smooth_width)
    return np.argmax(smoothed, axis=-1).astype(np.intp)


def estimate_angle_histogram(ctx: BlockContext, smooth_width: int = DEFAULT_SMOOTH_WIDTH) -> int:
    """Dominant folded edge orientation of a block, in whole degrees.

    The fold makes gradient direction and edge tangent coincide mod 90,
    so the returned bin is directly the rotation that aligns the dominant
    edge with an image axis. Ties go to the smaller bin; an empty
    histogram (constant block) yields 0.
    """
    return int(_histogram_angles(ctx.source_block()[None], smooth_width)[0])
