"""End-to-end encoder/decoder and the RDCT container format.

Encoding: tile the image into 8x8 blocks, pick a rotation angle per
block (exhaustive search by default, 0 forced for standard mode),
rotate, transform, keep the n largest coefficients and store them as
(index, float32 value) pairs together with the angle. Decoding runs the
inverse chain and clamps to [0, 255].

The encoder is vectorized across blocks: for each candidate angle the
whole image is rotated and transformed in one pass. encode_sweep()
additionally shares that per-angle work across several coefficient
budgets; its output is bit-identical to independent encode() calls.

Container layout (little-endian):

    magic "RDCT" | version u8 | width u32 | height u32 | mode u8 |
    n u16 | angle step in tenths of a degree u16
    per block, row-major: angle u8 | kept count u16 |
        kept count x (flat coefficient index u16 | value f32)

The extended-block side is never stored: decoders derive it from
(mode, angle), which makes the side formula part of the format contract.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import numpy as np

from . import angle as angle_mod
from . import geometry, transform
from .errors import CorruptStreamError, FormatError, TruncatedStreamError
from .geometry import CONST_RATE, CONST_SIZE_8, CONST_SIZE_12, RotationStrategy
from .imageio import BLOCK_SIZE, BlockGrid, GrayImage, tile, untile

MAGIC = b"RDCT"
VERSION = 1


class CodecMode(Enum):
    STANDARD = "std"
    ROTATED_CONST_RATE = "rot-rate"
    ROTATED_CONST_SIZE8 = "rot-size8"
    ROTATED_CONST_SIZE12 = "rot-size12"


_MODE_CODES = {
    CodecMode.STANDARD: 0,
    CodecMode.ROTATED_CONST_RATE: 1,
    CodecMode.ROTATED_CONST_SIZE8: 2,
    CodecMode.ROTATED_CONST_SIZE12: 3,
}
_CODE_MODES = {code: mode for mode, code in _MODE_CODES.items()}

_MODE_STRATEGY = {
    CodecMode.STANDARD: CONST_RATE,
    CodecMode.ROTATED_CONST_RATE: CONST_RATE,
    CodecMode.ROTATED_CONST_SIZE8: CONST_SIZE_8,
    CodecMode.ROTATED_CONST_SIZE12: CONST_SIZE_12,
}

_MODE_MAX_N = {
    CodecMode.STANDARD: 64,
    CodecMode.ROTATED_CONST_RATE: 144,
    CodecMode.ROTATED_CONST_SIZE8: 64,
    CodecMode.ROTATED_CONST_SIZE12: 144,
}

ESTIMATOR_EXHAUSTIVE = "exhaustive"
ESTIMATOR_HISTOGRAM = "histogram"


@dataclass(frozen=True)
class CodecConfig:
    mode: CodecMode
    n: int
    angle_step_deg: float = 1.0
    estimator: str = ESTIMATOR_EXHAUSTIVE
    smooth_width: int = angle_mod.DEFAULT_SMOOTH_WIDTH
    threads: int = 1

    def __post_init__(self):
        if not isinstance(self.mode, CodecMode):
            raise ValueError(f"unknown codec mode {self.mode!r}")
        if not 0 <= self.n <= _MODE_MAX_N[self.mode]:
            raise ValueError(
                f"n must lie in [0, {_MODE_MAX_N[self.mode]}] for mode "
                f"{self.mode.value}, got {self.n}"
            )
        step = float(self.angle_step_deg)
        if not 0.0 < step <= 45.0:
            raise ValueError(f"angle step must lie in (0, 45], got {step}")
        # Stored angles are whole degrees, so grid points must be integers.
        if not step.is_integer():
            raise ValueError(f"angle step must be a whole number of degrees, got {step}")
        if self.estimator not in (ESTIMATOR_EXHAUSTIVE, ESTIMATOR_HISTOGRAM):
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.smooth_width < 1 or self.smooth_width % 2 == 0:
            raise ValueError(f"smooth width must be odd and positive, got {self.smooth_width}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class BlockRecord:
    """Per-block payload: rotation angle and the surviving coefficients."""

    angle_code: int
    kept: tuple  # ((flat_index, value), ...) with strictly increasing indices


@dataclass(frozen=True)
class CompressedImage:
    width: int
    height: int
    mode: CodecMode
    n: int
    angle_step_deg: float
    records: tuple = field(repr=False)

    @property
    def blocks_across(self) -> int:
        return -(-self.width // BLOCK_SIZE)

    @property
    def blocks_down(self) -> int:
        return -(-self.height // BLOCK_SIZE)


def strategy_for_mode(mode: CodecMode) -> RotationStrategy:
    return _MODE_STRATEGY[mode]


def _record_side(mode: CodecMode, angle_code: int) -> int:
    return geometry.output_side(_MODE_STRATEGY[mode], float(angle_code))


def _block_centers(grid: BlockGrid):
    rows, cols = np.divmod(np.arange(len(grid.blocks)), grid.blocks_across)
    half = (BLOCK_SIZE - 1) / 2.0
    return cols * BLOCK_SIZE + half, rows * BLOCK_SIZE + half


def _ordered_map(fn, items, threads: int):
    """map() preserving item order, optionally fanned out over a thread pool."""
    if threads == 1:
        yield from map(fn, items)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(fn, items)


def _search_angles(
    image: GrayImage, grid: BlockGrid, cfg: CodecConfig, n_values: Sequence[int]
) -> dict[int, np.ndarray]:
    """Exhaustive per-block angle search, shared across coefficient budgets.

    Returns, for each n, the (B,) array of winning whole-degree angles.
    Candidates are scored with the decoder-exact reconstruction; ties
    keep the smallest angle, so 0 wins unless rotation strictly helps.
    """
    src = grid.blocks
    pixels = image.pixels
    centers_x, centers_y = _block_centers(grid)
    strategy = _MODE_STRATEGY[cfg.mode]
    thetas = [int(t) for t in angle_mod.angle_grid(cfg.angle_step_deg)]

    def score(theta: int) -> dict[int, np.ndarray]:
        ext = geometry._rotate_stack(pixels, centers_x, centers_y, float(theta), strategy)
        side = ext.shape[-1]
        coeffs = transform.dct2(ext)
        order = transform.selection_order(coeffs)
        mses = {}
        for n in n_values:
            k = min(n, side * side)
            foot = angle_mod._decoded_footprints(coeffs, float(theta), strategy, k, order)
            mses[n] = np.mean((src - foot) ** 2, axis=(1, 2))
        return mses

    best_mse = {n: np.full(len(src), np.inf) for n in n_values}
    best_angle = {n: np.zeros(len(src), dtype=np.intp) for n in n_values}
    for theta, mses in zip(thetas, _ordered_map(score, thetas, cfg.threads)):
        for n in n_values:
            better = mses[n] < best_mse[n] - angle_mod.MSE_TIE_EPSILON
            best_mse[n][better] = mses[n][better]
            best_angle[n][better] = theta
    return {n: best_angle[n] for n in n_values}


def _choose_angles(
    image: GrayImage, grid: BlockGrid, cfg: CodecConfig, n_values: Sequence[int]
) -> dict[int, np.ndarray]:
    count = len(grid.blocks)
    if cfg.mode is CodecMode.STANDARD:
        zeros = np.zeros(count, dtype=np.intp)
        return {n: zeros for n in n_values}
    if cfg.estimator == ESTIMATOR_HISTOGRAM:
        angles = angle_mod._histogram_angles(grid.blocks, cfg.smooth_width)
        return {n: angles for n in n_values}
    return _search_angles(image, grid, cfg, n_values)


def _encode_at_angles(
    image: GrayImage, grid: BlockGrid, cfg: CodecConfig, angles: np.ndarray
) -> CompressedImage:
    pixels = image.pixels
    centers_x, centers_y = _block_centers(grid)
    strategy = _MODE_STRATEGY[cfg.mode]
    records: list = [None] * len(grid.blocks)

    def encode_group(theta: int):
        idx = np.flatnonzero(angles == theta)
        ext = geometry._rotate_stack(
            pixels, centers_x[idx], centers_y[idx], float(theta), strategy
        )
        side = ext.shape[-1]
        k = min(cfg.n, side * side)
        coeffs = transform.dct2(ext)
        order = transform.selection_order(coeffs)[:, :k]
        flat = coeffs.reshape(len(idx), side * side)
        vals = np.take_along_axis(flat, order, axis=-1).astype(np.float32)
        group_records = []
        for row in range(len(idx)):
            kept = sorted(
                (int(i), float(v)) for i, v in zip(order[row], vals[row]) if v != 0.0
            )
            group_records.append(BlockRecord(int(theta), tuple(kept)))
        return idx, group_records

    groups = sorted(int(t) for t in np.unique(angles))
    for idx, group_records in _ordered_map(encode_group, groups, cfg.threads):
        for b, record in zip(idx, group_records):
            records[b] = record

    return CompressedImage(
        width=image.width,
        height=image.height,
        mode=cfg.mode,
        n=cfg.n,
        angle_step_deg=float(cfg.angle_step_deg),
        records=tuple(records),
    )


def encode(image: GrayImage, cfg: CodecConfig) -> CompressedImage:
    """Compress an image at one coefficient budget."""
    return encode_sweep(image, cfg, [cfg.n])[cfg.n]


def encode_sweep(
    image: GrayImage, cfg: CodecConfig, n_values: Sequence[int]
) -> dict[int, CompressedImage]:
    """Compress at several coefficient budgets, sharing per-angle work.

    The angle search re-runs per budget (the optimal angle depends on n)
    but rotation and transform of the candidates are computed once per
    angle. Results are bit-identical to separate encode() calls.
    """
    n_values = list(n_values)
    if len(n_values) != len(set(n_values)):
        raise ValueError("duplicate n values")
    for n in n_values:
        replace(cfg, n=n)  # runs per-n validation
    grid = tile(image)
    angles = _choose_angles(image, grid, cfg, n_values)
    return {
        n: _encode_at_angles(image, grid, replace(cfg, n=n), angles[n]) for n in n_values
    }


def block_angles(image: GrayImage, cfg: CodecConfig) -> np.ndarray:
    """Per-block chosen rotation angles, shaped (blocks_down, blocks_across)."""
    grid = tile(image)
    angles = _choose_angles(image, grid, cfg, [cfg.n])[cfg.n]
    return angles.reshape(grid.blocks_down, grid.blocks_across).copy()


def _validate_record(mode: CodecMode, n: int, record: BlockRecord) -> int:
    if not 0 <= record.angle_code < 90:
        raise CorruptStreamError(f"angle code {record.angle_code} outside [0, 90)")
    if mode is CodecMode.STANDARD and record.angle_code != 0:
        raise CorruptStreamError("standard-mode record carries a nonzero angle")
    side = _record_side(mode, record.angle_code)
    if len(record.kept) > min(n, side * side):
        raise CorruptStreamError(
            f"record keeps {len(record.kept)} coefficients, budget allows {n}"
        )
    prev = -1
    for index, _ in record.kept:
        if index <= prev:
            raise CorruptStreamError("coefficient indices not strictly increasing")
        if index >= side * side:
            raise CorruptStreamError(
                f"coefficient index {index} outside {side}x{side} grid"
            )
        prev = index
    return side


def decode(compressed: CompressedImage) -> GrayImage:
    """Reconstruct the image: inverse transform, derotate, clamp to [0, 255]."""
    grid_count = compressed.blocks_across * compressed.blocks_down
    if len(compressed.records) != grid_count:
        raise CorruptStreamError(
            f"stream holds {len(compressed.records)} records, geometry needs {grid_count}"
        )
    strategy = _MODE_STRATEGY[compressed.mode]
    sides = [
        _validate_record(compressed.mode, compressed.n, record)
        for record in compressed.records
    ]

    out = np.empty((grid_count, BLOCK_SIZE, BLOCK_SIZE), dtype=np.float64)
    angles = np.array([r.angle_code for r in compressed.records], dtype=np.intp)
    for theta in sorted(int(t) for t in np.unique(angles)):
        idx = np.flatnonzero(angles == theta)
        side = sides[idx[0]]
        trunc = np.zeros((len(idx), side * side), dtype=np.float64)
        for row, b in enumerate(idx):
            for index, value in compressed.records[b].kept:
                trunc[row, index] = value
        recon = transform.idct2(trunc.reshape(len(idx), side, side))
        out[idx] = geometry._derotate_stack(recon, float(theta), strategy)

    blocks = np.clip(out, 0.0, 255.0)
    grid = BlockGrid(
        blocks,
        compressed.blocks_across,
        compressed.blocks_down,
        compressed.width,
        compressed.height,
    )
    return untile(grid)


def serialize(compressed: CompressedImage) -> bytes:
    """Render a CompressedImage as an RDCT byte stream."""
    step_tenths = int(round(compressed.angle_step_deg * 10.0))
    parts = [
        MAGIC,
        bytes([VERSION]),
        struct.pack(
            "<IIBHH",
            compressed.width,
            compressed.height,
            _MODE_CODES[compressed.mode],
            compressed.n,
            step_tenths,
        ),
    ]
    for record in compressed.records:
        parts.append(struct.pack("<BH", record.angle_code, len(record.kept)))
        for index, value in record.kept:
            parts.append(struct.pack("<Hf", index, value))
    return b"".join(parts)


def deserialize(data: bytes) -> CompressedImage:
    """Parse an RDCT byte stream, validating structure and value ranges."""
    if len(data) < len(MAGIC) + 1:
        raise FormatError("stream too short for an RDCT header")
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"bad magic {data[:len(MAGIC)]!r}")
    version = data[len(MAGIC)]
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")

    pos = len(MAGIC) + 1
    header = struct.Struct("<IIBHH")
    if len(data) < pos + header.size:
        raise TruncatedStreamError("stream ends inside the header")
    width, height, mode_code, n, step_tenths = header.unpack_from(data, pos)
    pos += header.size
    if mode_code not in _CODE_MODES:
        raise CorruptStreamError(f"unknown mode code {mode_code}")
    mode = _CODE_MODES[mode_code]
    if width < 1 or height < 1:
        raise CorruptStreamError(f"bad dimensions {width}x{height}")
    if not 1 <= step_tenths <= 450:
        raise CorruptStreamError(f"bad angle step {step_tenths} tenths")
    if n > _MODE_MAX_N[mode]:
        raise CorruptStreamError(f"n={n} exceeds budget for mode {mode.value}")

    record_count = (-(-width // BLOCK_SIZE)) * (-(-height // BLOCK_SIZE))
    record_head = struct.Struct("<BH")
    pair = struct.Struct("<Hf")
    records = []
    for _ in range(record_count):
        if len(data) < pos + record_head.size:
            raise TruncatedStreamError("stream ends inside a block record")
        angle_code, kept_count = record_head.unpack_from(data, pos)
        pos += record_head.size
        if len(data) < pos + kept_count * pair.size:
            raise TruncatedStreamError("stream ends inside a coefficient list")
        kept = []
        for _ in range(kept_count):
            index, value = pair.unpack_from(data, pos)
            pos += pair.size
            kept.append((index, value))
        record = BlockRecord(angle_code, tuple(kept))
        _validate_record(mode, n, record)
        records.append(record)

    return CompressedImage(
        width=width,
        height=height,
        mode=mode,
        n=n,
        angle_step_deg=step_tenths / 10.0,
        records=tuple(records),
    )
