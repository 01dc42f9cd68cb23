"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The rate-distortion criteria (3-6) share one set of full 1-degree-grid
sweeps over the checked-in natural image and the synthetic 45-degree
stripe image; expect a couple of minutes of compute on first use.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import math

import numpy as np
import pytest

from rotdct import angle, bench, codec, geometry, transform
from rotdct.bench import SweepConfig
from rotdct.codec import CodecConfig, CodecMode
from rotdct.errors import CorruptStreamError, FormatError, TruncatedStreamError
from rotdct.geometry import CONST_RATE, CONST_SIZE_8, BlockContext
from rotdct.imageio import GrayImage

N_VALUES = (1, 2, 4, 8, 16, 32)


def _check(num, description, ok):
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {description}")
    assert ok, f"criterion {num}: {description}"


@pytest.fixture(scope="session")
def rd_tables(natural_image, synthetic_image):
    """PSNR per (image, mode, n) at the 1-degree grid."""
    tables = {}
    for name, image, modes in (
        ("natural", natural_image, (CodecMode.STANDARD, CodecMode.ROTATED_CONST_RATE)),
        ("synthetic", synthetic_image, (CodecMode.STANDARD, CodecMode.ROTATED_CONST_RATE)),
    ):
        points = bench.run_sweep(image, SweepConfig(n_values=N_VALUES, modes=modes))
        for p in points:
            tables[(name, p.mode, p.n)] = p.psnr_db
    size8 = bench.run_sweep(
        natural_image,
        SweepConfig(n_values=(2, 4), modes=(CodecMode.ROTATED_CONST_SIZE8,)),
    )
    for p in size8:
        tables[("natural", p.mode, p.n)] = p.psnr_db
    return tables


def _naive_dct2(block):
    n = block.shape[0]
    cos = [[math.cos(math.pi / n * (x + 0.5) * i) for x in range(n)] for i in range(n)]
    scale = [math.sqrt(1.0 / n)] + [math.sqrt(2.0 / n)] * (n - 1)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for x in range(n):
                for y in range(n):
                    acc += block[x, y] * cos[i][x] * cos[j][y]
            out[i, j] = acc * scale[i] * scale[j]
    return out


def test_criterion_1_transform_exactness():
    rng = np.random.default_rng(1)
    worst_rt = 0.0
    worst_oracle = 0.0
    for _ in range(200):
        block = rng.uniform(0.0, 255.0, size=(8, 8))
        coeffs = transform.dct2(block)
        worst_rt = max(worst_rt, float(np.max(np.abs(transform.idct2(coeffs) - block))))
        worst_oracle = max(worst_oracle, float(np.max(np.abs(coeffs - _naive_dct2(block)))))
    _check(
        1,
        f"round trip {worst_rt:.2e} and naive-oracle gap {worst_oracle:.2e} within 1e-9 "
        "on 200 random blocks",
        worst_rt < 1e-9 and worst_oracle < 1e-9,
    )


def test_criterion_2_step_edge_compaction():
    counts = {}
    for theta in (0.0, 45.0, 90.0):
        _, coeffs = bench.step_edge_demo(theta)
        counts[theta] = int(np.sum(np.abs(coeffs) > 1e-9))
    _check(
        2,
        f"step-edge coefficients: 0deg={counts[0.0]}, 90deg={counts[90.0]} (<=8), "
        f"45deg={counts[45.0]} (more)",
        counts[0.0] <= 8
        and counts[90.0] <= 8
        and counts[45.0] > counts[0.0]
        and counts[45.0] > counts[90.0],
    )


def test_criterion_3_rotated_never_loses(rd_tables):
    failures = [
        (name, n)
        for name in ("natural", "synthetic")
        for n in N_VALUES
        if rd_tables[(name, CodecMode.ROTATED_CONST_RATE, n)]
        < rd_tables[(name, CodecMode.STANDARD, n)]
    ]
    _check(
        3,
        "rotated-constant-rate PSNR >= standard PSNR at every n on both images "
        f"(violations: {failures or 'none'})",
        not failures,
    )


def test_criterion_4_low_rate_improvement(rd_tables):
    gains = {
        (name, n): rd_tables[(name, CodecMode.ROTATED_CONST_RATE, n)]
        - rd_tables[(name, CodecMode.STANDARD, n)]
        for name in ("natural", "synthetic")
        for n in (2, 4)
    }
    ok = all(gains[("synthetic", n)] >= 1.0 for n in (2, 4)) and all(
        gains[("natural", n)] >= 0.2 for n in (2, 4)
    )
    detail = ", ".join(f"{name} n={n}: {g:+.3f} dB" for (name, n), g in sorted(gains.items()))
    _check(4, f"low-rate gains ({detail})", ok)


def test_criterion_5_advantage_shrinks_with_rate(rd_tables):
    gain = {
        n: rd_tables[("natural", CodecMode.ROTATED_CONST_RATE, n)]
        - rd_tables[("natural", CodecMode.STANDARD, n)]
        for n in (2, 32)
    }
    _check(
        5,
        f"advantage at n=32 ({gain[32]:+.3f} dB) <= advantage at n=2 ({gain[2]:+.3f} dB)",
        gain[32] <= gain[2],
    )


def test_criterion_6_strategies_comparable(rd_tables):
    deltas = {
        n: abs(
            rd_tables[("natural", CodecMode.ROTATED_CONST_RATE, n)]
            - rd_tables[("natural", CodecMode.ROTATED_CONST_SIZE8, n)]
        )
        for n in (2, 4)
    }
    _check(
        6,
        f"|const-rate - const-size8| = {deltas[2]:.3f} / {deltas[4]:.3f} dB at n=2/4 (<= 1.0)",
        all(d <= 1.0 for d in deltas.values()),
    )


def test_criterion_7_size_formula_contract():
    side0 = geometry.extended_side(0.0)
    side45 = geometry.extended_side(45.0)
    reduction = 1.0 - 1.0 / geometry.sampling_scale(CONST_SIZE_8, 45.0)
    ok = side0 == 8 and side45 == 12 and abs(reduction - 0.293) <= 0.001
    _check(
        7,
        f"extended side 0deg={side0}, 45deg={side45}; size-8 sampling loss at 45deg "
        f"{100 * reduction:.2f}% (29.3 +- 0.1)",
        ok,
    )


def test_criterion_8_histogram_estimator_on_ramps():
    worst = 0
    for alpha in (0, 15, 30, 45, 60, 75):
        t = math.radians(alpha)
        xs = np.arange(8.0)
        across = -xs[None, :] * math.sin(t) + xs[:, None] * math.cos(t)
        block = GrayImage(128.0 + 30.0 * across / 8.0)
        estimated = angle.estimate_angle_histogram(BlockContext(block, 0, 0), smooth_width=1)
        distance = min(abs(estimated - alpha), 90 - abs(estimated - alpha))
        worst = max(worst, distance)
    _check(8, f"ramp orientations recovered within {worst} bin(s) (<= 1)", worst <= 1)


def test_criterion_9_bitstream_roundtrip_and_errors():
    rng = np.random.default_rng(9)
    modes = list(CodecMode)
    ok = True
    for i in range(50):
        h = int(rng.integers(8, 25))
        w = int(rng.integers(8, 25))
        img = GrayImage(rng.integers(0, 256, size=(h, w)).astype(np.float64))
        cfg = CodecConfig(
            mode=modes[i % len(modes)],
            n=int(rng.integers(1, 12)),
            angle_step_deg=float(rng.integers(5, 30)),
        )
        comp = codec.encode(img, cfg)
        data = codec.serialize(comp)
        again = codec.deserialize(data)
        ok = ok and again == comp and codec.serialize(again) == data

    sample = codec.serialize(
        codec.encode(
            GrayImage(rng.integers(0, 256, size=(8, 8)).astype(np.float64)),
            CodecConfig(mode=CodecMode.ROTATED_CONST_RATE, n=3, angle_step_deg=15.0),
        )
    )
    try:
        codec.deserialize(b"XXXX" + sample[4:])
        ok = False
    except FormatError:
        pass
    try:
        codec.deserialize(sample[:-3])
        ok = False
    except TruncatedStreamError:
        pass
    corrupted = bytearray(sample)
    corrupted[18] = 97  # angle byte of the sole record
    try:
        codec.deserialize(bytes(corrupted))
        ok = False
    except CorruptStreamError:
        pass
    _check(9, "50 serialize round trips byte-exact; magic/truncation/angle errors raised", ok)


def test_criterion_10_determinism(synthetic_image):
    cfg1 = CodecConfig(mode=CodecMode.ROTATED_CONST_RATE, n=3, angle_step_deg=5.0, threads=1)
    cfg2 = CodecConfig(mode=CodecMode.ROTATED_CONST_RATE, n=3, angle_step_deg=5.0, threads=2)
    runs = [codec.serialize(codec.encode(synthetic_image, cfg)) for cfg in (cfg1, cfg1, cfg2)]
    sweep_cfg = SweepConfig(
        n_values=(2, 4),
        modes=(CodecMode.STANDARD, CodecMode.ROTATED_CONST_RATE),
        angle_step_deg=5.0,
    )
    sweep_threaded = SweepConfig(
        n_values=(2, 4),
        modes=(CodecMode.STANDARD, CodecMode.ROTATED_CONST_RATE),
        angle_step_deg=5.0,
        threads=2,
    )
    csvs = [
        bench.emit_csv(bench.run_sweep(synthetic_image, c))
        for c in (sweep_cfg, sweep_cfg, sweep_threaded)
    ]
    ok = runs[0] == runs[1] == runs[2] and csvs[0] == csvs[1] == csvs[2]
    _check(10, "encode and sweep outputs byte-identical across runs and thread counts", ok)
