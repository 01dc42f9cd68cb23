"""Rotated-block DCT coding lab.

Per-block rotation aligns edges with the transform axes before the DCT,
improving energy compaction; this package implements the rotation
machinery, a keep-n-largest truncation codec around it, and a
rate-distortion harness comparing the rotated variants with the
standard block DCT.
"""

from .angle import (
    AngleDecision,
    AngleSearchConfig,
    block_mse,
    estimate_angle_exhaustive,
    estimate_angle_histogram,
    gradient_histogram,
    gradient_orientation,
    reconstruct_at,
    smooth_histogram,
)
from .bench import (
    RdPoint,
    SweepConfig,
    angle_map,
    emit_csv,
    psnr,
    run_sweep,
    step_edge_block,
    step_edge_demo,
    synthetic_edge_image,
)
from .codec import (
    BlockRecord,
    CodecConfig,
    CodecMode,
    CompressedImage,
    decode,
    deserialize,
    encode,
    encode_sweep,
    serialize,
)
from .errors import (
    CorruptStreamError,
    FormatError,
    RotDctError,
    TruncatedStreamError,
    UnsupportedFormatError,
)
from .geometry import (
    CONST_RATE,
    CONST_SIZE_8,
    CONST_SIZE_12,
    BlockContext,
    ExtendedBlock,
    RotationStrategy,
    StrategyKind,
    bicubic_sample,
    derotate_block,
    extended_side,
    output_side,
    rotate_block,
    sampling_scale,
)
from .imageio import BlockGrid, GrayImage, load_pgm, save_pgm, tile, untile
from .transform import count_nonzero, dct2, idct2, keep_largest, zigzag_order

__version__ = "0.1.0"
