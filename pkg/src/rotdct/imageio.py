"""Grayscale image I/O (binary PGM) and 8x8 block tiling.

Images are stored as float64 arrays indexed [row, col] with values in
[0, 255]. Blocks are stacked into a single (count, 8, 8) array in
row-major block order, which keeps whole-image codec passes vectorizable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError, TruncatedStreamError, UnsupportedFormatError

BLOCK_SIZE = 8


@dataclass(frozen=True)
class GrayImage:
    """A grayscale image with real-valued samples in [0, 255]."""

    pixels: np.ndarray  # (height, width) float64

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2D array, got shape {px.shape}")
        if not np.all(np.isfinite(px)):
            raise ValueError("image samples must be finite")
        if px.min() < 0.0 or px.max() > 255.0:
            raise ValueError("image samples must lie in [0, 255]")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class BlockGrid:
    """An image cut into 8x8 blocks, padded by edge replication."""

    blocks: np.ndarray  # (blocks_down * blocks_across, 8, 8) row-major
    blocks_across: int
    blocks_down: int
    original_width: int
    original_height: int

    def __post_init__(self):
        expected = self.blocks_across * self.blocks_down
        if self.blocks.shape != (expected, BLOCK_SIZE, BLOCK_SIZE):
            raise ValueError(
                f"blocks shape {self.blocks.shape} does not match "
                f"{self.blocks_down}x{self.blocks_across} grid of 8x8 blocks"
            )

    def block(self, row: int, col: int) -> np.ndarray:
        return self.blocks[row * self.blocks_across + col]


def load_pgm(data: bytes) -> GrayImage:
    """Parse a binary PGM (P5) stream with maxval <= 255.

    Header tokens may be separated by any whitespace; '#' comments are
    allowed anywhere in the header. Exactly the declared payload is
    consumed; trailing bytes are ignored.
    """
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        if pos >= len(data):
            raise FormatError("unexpected end of PGM header")
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        return data[start:pos]

    if len(data) == 0:
        raise FormatError("empty stream")
    magic = next_token()
    if magic != b"P5":
        raise FormatError(f"not a binary PGM (P5) stream, magic {magic!r}")

    fields = []
    for name in ("width", "height", "maxval"):
        token = next_token()
        try:
            value = int(token)
        except ValueError:
            raise FormatError(f"invalid {name} token {token!r}") from None
        if value <= 0:
            raise FormatError(f"non-positive {name}: {value}")
        fields.append(value)
    width, height, maxval = fields
    if maxval > 255:
        raise UnsupportedFormatError(f"maxval {maxval} exceeds 8-bit range")

    # Single whitespace byte separates the header from the raster.
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after maxval")
    pos += 1

    payload = data[pos : pos + width * height]
    if len(payload) < width * height:
        raise TruncatedStreamError(
            f"payload holds {len(payload)} of {width * height} declared bytes"
        )
    samples = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    return GrayImage(samples.reshape(height, width))


def save_pgm(image: GrayImage) -> bytes:
    """Serialize to binary PGM (P5), rounding samples to the nearest byte."""
    quantized = np.clip(np.rint(image.pixels), 0, 255).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + quantized.tobytes()


def tile(image: GrayImage) -> BlockGrid:
    """Cut an image into 8x8 blocks, padding to multiples of 8 by edge replication."""
    h, w = image.height, image.width
    pad_h = (-h) % BLOCK_SIZE
    pad_w = (-w) % BLOCK_SIZE
    padded = np.pad(image.pixels, ((0, pad_h), (0, pad_w)), mode="edge")
    down = padded.shape[0] // BLOCK_SIZE
    across = padded.shape[1] // BLOCK_SIZE
    blocks = (
        padded.reshape(down, BLOCK_SIZE, across, BLOCK_SIZE)
        .swapaxes(1, 2)
        .reshape(down * across, BLOCK_SIZE, BLOCK_SIZE)
        .copy()
    )
    return BlockGrid(blocks, across, down, w, h)


def untile(grid: BlockGrid) -> GrayImage:
    """Reassemble blocks row-major and crop the padding away."""
    down, across = grid.blocks_down, grid.blocks_across
    canvas = (
        grid.blocks.reshape(down, across, BLOCK_SIZE, BLOCK_SIZE)
        .swapaxes(1, 2)
        .reshape(down * BLOCK_SIZE, across * BLOCK_SIZE)
    )
    return GrayImage(canvas[: grid.original_height, : grid.original_width].copy())


def padded_pixels(image: GrayImage) -> np.ndarray:
    """The edge-replicated canvas that tile() cuts blocks from."""
    pad_h = (-image.height) % BLOCK_SIZE
    pad_w = (-image.width) % BLOCK_SIZE
    return np.pad(image.pixels, ((0, pad_h), (0, pad_w)), mode="edge")
