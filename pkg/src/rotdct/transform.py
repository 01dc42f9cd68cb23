"""Forward/inverse 2D DCT for block sides 8..12 and keep-n-largest truncation.

The transform is the orthonormal DCT-II: basis
cos[pi/N (x+1/2) i] * cos[pi/N (y+1/2) j], scaled by sqrt(1/N) for
frequency index 0 and sqrt(2/N) otherwise, per dimension. Under this
convention the inverse is the transpose and Parseval holds, so
truncation error in the coefficient domain equals reconstruction error
in the sample domain.

All functions accept a single (N, N) block or a stacked (..., N, N)
batch; the batch case runs the identical per-block arithmetic.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MIN_SIDE = 8
MAX_SIDE = 12


@lru_cache(maxsize=None)
def dct_matrix(side: int) -> np.ndarray:
    """Orthonormal DCT-II matrix C with C[i, x] = a_i cos[pi/N (x+1/2) i]."""
    if not MIN_SIDE <= side <= MAX_SIDE:
        raise ValueError(f"block side must be in [{MIN_SIDE}, {MAX_SIDE}], got {side}")
    n = side
    x = np.arange(n)
    i = np.arange(n)[:, None]
    mat = np.cos(np.pi / n * (x + 0.5) * i)
    mat[0, :] *= np.sqrt(1.0 / n)
    mat[1:, :] *= np.sqrt(2.0 / n)
    mat.setflags(write=False)
    return mat


def _side_of(values: np.ndarray) -> int:
    values = np.asarray(values)
    if values.ndim < 2 or values.shape[-1] != values.shape[-2]:
        raise ValueError(f"expected square block(s), got shape {values.shape}")
    return values.shape[-1]


def dct2(block: np.ndarray) -> np.ndarray:
    """Forward orthonormal 2D DCT-II of an (..., N, N) block.

    The first sample is subtracted before the matrix products and folded
    back into DC analytically, so a constant block transforms to exactly
    one nonzero coefficient instead of DC plus rounding noise.
    """
    block = np.asarray(block, dtype=np.float64)
    side = _side_of(block)
    c = dct_matrix(side)
    offset = block[..., 0:1, 0:1]
    out = np.matmul(c, np.matmul(block - offset, c.T))
    out[..., 0, 0] += offset[..., 0, 0] * side
    return out


def idct2(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of dct2 (the transpose map, exact under orthonormal scaling).

    DC is applied analytically, mirroring dct2's offset handling: a grid
    holding only a DC value reconstructs to an exactly constant block.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    side = _side_of(coeffs)
    c = dct_matrix(side)
    rest = coeffs.copy()
    rest[..., 0, 0] = 0.0
    out = np.matmul(c.T, np.matmul(rest, c))
    out += coeffs[..., 0:1, 0:1] / side
    return out


@lru_cache(maxsize=None)
def zigzag_order(side: int) -> np.ndarray:
    """Flat row-major indices of an NxN grid in zigzag (low-to-high frequency) order.

    Same traversal as the JPEG scan: anti-diagonals d = i+j, running
    toward higher row index on odd diagonals and back on even ones.
    """
    order = []
    for d in range(2 * side - 1):
        lo = max(0, d - side + 1)
        hi = min(d, side - 1)
        rows = range(lo, hi + 1) if d % 2 == 1 else range(hi, lo - 1, -1)
        order.extend(i * side + (d - i) for i in rows)
    arr = np.array(order, dtype=np.intp)
    arr.setflags(write=False)
    return arr


def selection_order(coeffs: np.ndarray) -> np.ndarray:
    """Flat indices of an (..., N, N) grid sorted by keep priority.

    Priority is descending |coefficient|; equal magnitudes fall back to
    zigzag order, so ties favor low frequencies deterministically.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    side = _side_of(coeffs)
    zig = zigzag_order(side)
    flat = coeffs.reshape(coeffs.shape[:-2] + (side * side,))
    mag_zig = np.abs(flat[..., zig])
    # Stable sort over zigzag-ordered magnitudes keeps zigzag order on ties.
    rank = np.argsort(-mag_zig, axis=-1, kind="stable")
    return zig[rank]


def keep_largest(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Zero all but the n largest-magnitude coefficients of an (..., N, N) grid."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    side = _side_of(coeffs)
    if not 0 <= n <= side * side:
        raise ValueError(f"n must be in [0, {side * side}], got {n}")
    order = selection_order(coeffs)[..., :n]
    flat = coeffs.reshape(coeffs.shape[:-2] + (side * side,))
    kept = np.zeros_like(flat)
    np.put_along_axis(kept, order, np.take_along_axis(flat, order, axis=-1), axis=-1)
    return kept.reshape(coeffs.shape)


def count_nonzero(coeffs: np.ndarray) -> int:
    """Number of entries with magnitude > 0."""
    return int(np.count_nonzero(np.asarray(coeffs)))
