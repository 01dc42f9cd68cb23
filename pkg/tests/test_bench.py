import math

import numpy as np
import pytest

from rotdct import bench, codec, transform
from rotdct.bench import RdPoint, SweepConfig
from rotdct.codec import CodecConfig, CodecMode
from rotdct.imageio import GrayImage


def test_psnr_identical_is_infinite():
    img = GrayImage(np.full((4, 4), 9.0))
    assert math.isinf(bench.psnr(img, img))


def test_psnr_unit_difference():
    a = GrayImage(np.zeros((5, 7)))
    b = GrayImage(np.ones((5, 7)))
    assert bench.psnr(a, b) == pytest.approx(10.0 * math.log10(255.0**2), abs=1e-9)


def test_psnr_full_range_is_zero():
    a = GrayImage(np.zeros((3, 3)))
    b = GrayImage(np.full((3, 3), 255.0))
    assert bench.psnr(a, b) == pytest.approx(0.0, abs=1e-12)


def test_psnr_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        bench.psnr(GrayImage(np.zeros((4, 4))), GrayImage(np.zeros((4, 5))))


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(n_values=(), modes=(CodecMode.STANDARD,))
    with pytest.raises(ValueError):
        SweepConfig(n_values=(4, 2), modes=(CodecMode.STANDARD,))
    with pytest.raises(ValueError):
        SweepConfig(n_values=(2,), modes=())


def test_sweep_constant_image_hits_infinite_psnr():
    img = GrayImage(np.full((16, 16), 55.0))
    points = bench.run_sweep(
        img, SweepConfig(n_values=(1,), modes=(CodecMode.STANDARD, CodecMode.ROTATED_CONST_RATE))
    )
    assert len(points) == 2
    assert all(math.isinf(p.psnr_db) for p in points)
    assert all(p.coefficients_per_block == 1.0 for p in points)


def test_sweep_rows_in_mode_then_n_order(rng):
    img = GrayImage(rng.integers(0, 256, size=(16, 16)).astype(np.float64))
    cfg = SweepConfig(
        n_values=(1, 3),
        modes=(CodecMode.STANDARD, CodecMode.ROTATED_CONST_SIZE8),
        angle_step_deg=15.0,
    )
    points = bench.run_sweep(img, cfg)
    assert [(p.mode, p.n) for p in points] == [
        (CodecMode.STANDARD, 1),
        (CodecMode.STANDARD, 3),
        (CodecMode.ROTATED_CONST_SIZE8, 1),
        (CodecMode.ROTATED_CONST_SIZE8, 3),
    ]
    assert all(p.bytes_total > 0 for p in points)


def test_sweep_deterministic_csv(rng):
    img = GrayImage(rng.integers(0, 256, size=(16, 16)).astype(np.float64))
    cfg = SweepConfig(n_values=(2,), modes=(CodecMode.ROTATED_CONST_RATE,), angle_step_deg=15.0)
    a = bench.emit_csv(bench.run_sweep(img, cfg))
    b = bench.emit_csv(bench.run_sweep(img, cfg))
    assert a == b


def test_emit_csv_header_only():
    assert bench.emit_csv([]) == "mode,n,coeffs_per_block,psnr_db,bytes\n"


def test_emit_csv_single_point_and_roundtrip():
    point = RdPoint(CodecMode.STANDARD, 4, 3.25, 31.415926, 1234)
    text = bench.emit_csv([point])
    lines = text.strip().split("\n")
    assert len(lines) == 2
    fields = lines[1].split(",")
    assert fields[0] == "std" and int(fields[1]) == 4
    assert float(fields[2]) == pytest.approx(3.25, abs=1e-6)
    assert float(fields[3]) == pytest.approx(31.415926, abs=1e-6)
    assert int(fields[4]) == 1234


def test_emit_csv_renders_infinity():
    point = RdPoint(CodecMode.STANDARD, 1, 1.0, math.inf, 10)
    assert bench.emit_csv([point]).strip().split("\n")[1].split(",")[3] == "inf"


def _significant(coeffs):
    return int(np.sum(np.abs(coeffs) > 1e-9))


def test_step_edge_axis_aligned_compaction():
    block0, coeffs0 = bench.step_edge_demo(0.0)
    assert block0.shape == (8, 8)
    assert _significant(coeffs0) <= 8
    # Varies along rows only: all energy sits in column 0.
    nonzero = np.abs(coeffs0) > 1e-9
    assert not nonzero[:, 1:].any()


def test_step_edge_90_is_transpose_of_0():
    # Same compaction structure with rows and columns swapped; the bright
    # half-plane mirrors, so only magnitudes are comparable.
    _, coeffs0 = bench.step_edge_demo(0.0)
    _, coeffs90 = bench.step_edge_demo(90.0)
    assert _significant(coeffs90) <= 8
    nonzero = np.abs(coeffs90) > 1e-9
    assert not nonzero[1:, :].any()
    assert np.allclose(np.abs(coeffs90), np.abs(coeffs0.T), atol=1e-9)


def test_step_edge_diagonal_spreads_energy():
    _, coeffs0 = bench.step_edge_demo(0.0)
    _, coeffs45 = bench.step_edge_demo(45.0)
    assert _significant(coeffs45) > _significant(coeffs0)


def test_step_edge_values_span_range():
    block, _ = bench.step_edge_demo(30.0)
    assert block.min() == 0.0 and block.max() == 255.0
    assert np.all((block >= 0.0) & (block <= 255.0))


def test_synthetic_edge_image_properties():
    img = bench.synthetic_edge_image(45.0, size=64, period=16.0)
    assert (img.width, img.height) == (64, 64)
    assert img.pixels.min() >= 0.0 and img.pixels.max() <= 255.0
    assert img.pixels.std() > 50.0  # strong stripes, not a flat field


def test_standard_psnr_non_decreasing_in_n(rng):
    img = GrayImage(rng.integers(0, 256, size=(24, 24)).astype(np.float64))
    points = bench.run_sweep(
        img, SweepConfig(n_values=(1, 2, 4, 8, 16, 32, 64), modes=(CodecMode.STANDARD,))
    )
    psnrs = [p.psnr_db for p in points]
    assert all(b >= a for a, b in zip(psnrs, psnrs[1:]))


def test_standard_full_rank_on_natural_image(natural_image):
    comp = codec.encode(natural_image, CodecConfig(mode=CodecMode.STANDARD, n=64))
    assert bench.psnr(natural_image, codec.decode(comp)) >= 50.0


def test_angle_map_dimensions(rng):
    img = GrayImage(rng.integers(0, 256, size=(16, 32)).astype(np.float64))
    cfg = CodecConfig(mode=CodecMode.ROTATED_CONST_RATE, n=2, angle_step_deg=15.0)
    amap = bench.angle_map(img, cfg)
    assert (amap.height, amap.width) == (2, 4)
    assert amap.pixels.max() <= 255.0
