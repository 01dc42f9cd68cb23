"""Rate-distortion experiment harness.

Sweeps coefficient budgets over codec modes, measuring PSNR against the
source image and the mean number of stored coefficients per block (the
rotation angle costs a few bits but is not counted as a coefficient;
serialized byte sizes are reported alongside for honesty). Results are
emitted as CSV for external plotting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import codec, transform
from .codec import CodecConfig, CodecMode
from .imageio import BLOCK_SIZE, GrayImage


@dataclass(frozen=True)
class RdPoint:
    """One rate-distortion measurement."""

    mode: CodecMode
    n: int
    coefficients_per_block: float
    psnr_db: float  # math.inf when the reconstruction is exact
    bytes_total: int


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple
    modes: tuple
    angle_step_deg: float = 1.0
    estimator: str = codec.ESTIMATOR_EXHAUSTIVE
    smooth_width: int = 5
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError(f"n_values must be strictly increasing, got {self.n_values}")
        if not self.modes:
            raise ValueError("modes must be non-empty")


def psnr(reference: GrayImage, test: GrayImage) -> float:
    """10 log10(255^2 / MSE) in dB; inf when the images match exactly."""
    if (reference.width, reference.height) != (test.width, test.height):
        raise ValueError(
            f"dimension mismatch: {reference.width}x{reference.height} vs "
            f"{test.width}x{test.height}"
        )
    mse = float(np.mean((reference.pixels - test.pixels) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def run_sweep(image: GrayImage, cfg: SweepConfig) -> list[RdPoint]:
    """Encode/decode at every (mode, n) and measure rate and distortion.

    Rows come out in (mode, n) order. Per mode, the per-angle rotation
    and transform work is shared across budgets; results are identical
    to encoding each point separately.
    """
    points = []
    for mode in cfg.modes:
        base = CodecConfig(
            mode=mode,
            n=cfg.n_values[0],
            angle_step_deg=cfg.angle_step_deg,
            estimator=cfg.estimator,
            smooth_width=cfg.smooth_width,
            threads=cfg.threads,
        )
        compressed = codec.encode_sweep(image, base, cfg.n_values)
        for n in cfg.n_values:
            comp = compressed[n]
            decoded = codec.decode(comp)
            kept = float(np.mean([len(r.kept) for r in comp.records]))
            points.append(
                RdPoint(
                    mode=mode,
                    n=n,
                    coefficients_per_block=kept,
                    psnr_db=psnr(image, decoded),
                    bytes_total=len(codec.serialize(comp)),
                )
            )
    return points


def emit_csv(points: Iterable[RdPoint]) -> str:
    """Render sweep points as CSV, one row per point."""
    lines = ["mode,n,coeffs_per_block,psnr_db,bytes"]
    for p in points:
        psnr_text = "inf" if math.isinf(p.psnr_db) else f"{p.psnr_db:.6f}"
        lines.append(
            f"{p.mode.value},{p.n},{p.coefficients_per_block:.6f},{psnr_text},{p.bytes_total}"
        )
    return "\n".join(lines) + "\n"


def _halfplane_coverage(cx: float, cy: float, nx: float, ny: float, offset: float) -> float:
    """Area of the unit pixel cell at (cx, cy) inside nx*x + ny*y >= offset.

    Sutherland-Hodgman clip of the cell against the half-plane, then the
    shoelace area of what remains.
    """
    cell = [
        (cx - 0.5, cy - 0.5),
        (cx + 0.5, cy - 0.5),
        (cx + 0.5, cy + 0.5),
        (cx - 0.5, cy + 0.5),
    ]
    clipped = []
    for i, (x0, y0) in enumerate(cell):
        x1, y1 = cell[(i + 1) % len(cell)]
        d0 = nx * x0 + ny * y0 - offset
        d1 = nx * x1 + ny * y1 - offset
        if d0 >= 0.0:
            clipped.append((x0, y0))
        if (d0 >= 0.0) != (d1 >= 0.0):
            t = d0 / (d0 - d1)
            clipped.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    if len(clipped) < 3:
        return 0.0
    area = 0.0
    for i, (x0, y0) in enumerate(clipped):
        x1, y1 = clipped[(i + 1) % len(clipped)]
        area += x0 * y1 - x1 * y0
    return abs(area) / 2.0


def step_edge_block(angle_deg: float) -> np.ndarray:
    """8x8 step edge through the block center at the given angle.

    The edge line runs at angle_deg from the x-axis; pixels are
    anti-aliased by the exact area each unit cell covers on the bright
    side. Values span [0, 255].
    """
    if not 0.0 <= angle_deg <= 90.0:
        raise ValueError(f"angle must lie in [0, 90], got {angle_deg}")
    t = math.radians(angle_deg)
    # Bright side of the line through the block center with tangent
    # (cos t, sin t): normal (-sin t, cos t).
    nx, ny = -math.sin(t), math.cos(t)
    c = (BLOCK_SIZE - 1) / 2.0
    offset = nx * c + ny * c
    block = np.empty((BLOCK_SIZE, BLOCK_SIZE), dtype=np.float64)
    for y in range(BLOCK_SIZE):
        for x in range(BLOCK_SIZE):
            block[y, x] = 255.0 * _halfplane_coverage(float(x), float(y), nx, ny, offset)
    return block


def step_edge_demo(angle_deg: float):
    """The step-edge block at an angle together with its DCT coefficients.

    Axis-aligned edges (0 or 90 degrees) excite a single row or column of
    coefficients; slanted ones spread energy across the grid.
    """
    block = step_edge_block(angle_deg)
    return block, transform.dct2(block)


def synthetic_edge_image(
    angle_deg: float = 45.0, size: int = 128, period: float = 24.0
) -> GrayImage:
    """Stripe pattern with hard edges at one orientation, anti-aliased.

    Stripes run at angle_deg from the x-axis and repeat every `period`
    pixels across; edges are softened by 4x4 subpixel area sampling.
    """
    t = math.radians(float(angle_deg))
    sub = (np.arange(4) + 0.5) / 4.0 - 0.5
    coords = np.arange(size, dtype=np.float64)
    acc = np.zeros((size, size), dtype=np.float64)
    for oy in sub:
        for ox in sub:
            x = coords[None, :] + ox
            y = coords[:, None] + oy
            across = -x * math.sin(t) + y * math.cos(t)
            phase = np.mod(across, period) / period
            acc += np.where(phase < 0.5, 255.0, 0.0)
    return GrayImage(acc / 16.0)


def angle_map(image: GrayImage, cfg: CodecConfig) -> GrayImage:
    """Per-block chosen angles rendered as a small image (0..89 -> 0..255)."""
    angles = codec.block_angles(image, cfg)
    return GrayImage(np.rint(angles * (255.0 / 89.0)))
