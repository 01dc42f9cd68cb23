"""Command-line front end: encode, decode, sweep, anglemap, demo, psnr.

Thin shell over the library; exit status 0 on success, 1 on usage
errors, 2 on data/format errors. Diagnostics go to stderr, data to
files or stdout.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import bench, codec, imageio
from .codec import CodecConfig, CodecMode
from .errors import RotDctError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with status 2
        raise UsageError(message)


def _parse_modes(text: str) -> list[CodecMode]:
    modes = []
    for token in text.split(","):
        token = token.strip()
        try:
            modes.append(CodecMode(token))
        except ValueError:
            choices = ", ".join(m.value for m in CodecMode)
            raise UsageError(f"unknown mode {token!r} (choose from {choices})") from None
    return modes


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(token) for token in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _add_codec_flags(parser: argparse.ArgumentParser, with_mode: bool, mode_default: str):
    if with_mode:
        parser.add_argument(
            "--mode", default=mode_default, choices=[m.value for m in CodecMode]
        )
    parser.add_argument("--angle-step", type=float, default=1.0, metavar="DEG")
    parser.add_argument(
        "--estimator",
        choices=[codec.ESTIMATOR_EXHAUSTIVE, codec.ESTIMATOR_HISTOGRAM],
        default=codec.ESTIMATOR_EXHAUSTIVE,
    )
    parser.add_argument("--smooth-width", type=int, default=5, metavar="BINS")
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> _Parser:
    parser = _Parser(prog="rotdct", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="compress a PGM image to an RDCT stream")
    p.add_argument("--in", dest="input", required=True, metavar="IMG.pgm")
    p.add_argument("--out", dest="output", required=True, metavar="OUT.rdct")
    p.add_argument("--n", type=int, required=True, help="coefficients kept per block")
    _add_codec_flags(p, with_mode=True, mode_default="std")

    p = sub.add_parser("decode", help="decompress an RDCT stream to PGM")
    p.add_argument("--in", dest="input", required=True, metavar="IMG.rdct")
    p.add_argument("--out", dest="output", required=True, metavar="OUT.pgm")

    p = sub.add_parser("psnr", help="PSNR between two PGM images")
    p.add_argument("--ref", required=True, metavar="REF.pgm")
    p.add_argument("--test", required=True, metavar="TEST.pgm")

    p = sub.add_parser("sweep", help="rate-distortion sweep, CSV output")
    p.add_argument("--in", dest="input", required=True, metavar="IMG.pgm")
    p.add_argument("--modes", default="std", metavar="M1,M2,...")
    p.add_argument("--n", required=True, metavar="N1,N2,...")
    p.add_argument("--out", dest="output", default="-", metavar="OUT.csv")
    _add_codec_flags(p, with_mode=False, mode_default="std")

    p = sub.add_parser("anglemap", help="per-block chosen angles as a small PGM")
    p.add_argument("--in", dest="input", required=True, metavar="IMG.pgm")
    p.add_argument("--out", dest="output", required=True, metavar="MAP.pgm")
    p.add_argument("--n", type=int, required=True)
    _add_codec_flags(p, with_mode=True, mode_default="rot-rate")

    p = sub.add_parser("demo", help="step-edge transform tables at several angles")
    p.add_argument("--angles", default="0,45,90", metavar="A1,A2,...")

    return parser


def _load_image(path: str) -> imageio.GrayImage:
    return imageio.load_pgm(Path(path).read_bytes())


def _codec_config(args, mode: CodecMode, n: int) -> CodecConfig:
    return CodecConfig(
        mode=mode,
        n=n,
        angle_step_deg=args.angle_step,
        estimator=args.estimator,
        smooth_width=args.smooth_width,
        threads=args.threads,
    )


def _cmd_encode(args) -> int:
    image = _load_image(args.input)
    cfg = _codec_config(args, CodecMode(args.mode), args.n)
    stream = codec.serialize(codec.encode(image, cfg))
    Path(args.output).write_bytes(stream)
    return 0


def _cmd_decode(args) -> int:
    compressed = codec.deserialize(Path(args.input).read_bytes())
    image = codec.decode(compressed)
    Path(args.output).write_bytes(imageio.save_pgm(image))
    return 0


def _cmd_psnr(args) -> int:
    value = bench.psnr(_load_image(args.ref), _load_image(args.test))
    print("inf" if math.isinf(value) else f"{value:.6f}")
    return 0


def _cmd_sweep(args) -> int:
    image = _load_image(args.input)
    cfg = bench.SweepConfig(
        n_values=tuple(_parse_ints(args.n)),
        modes=tuple(_parse_modes(args.modes)),
        angle_step_deg=args.angle_step,
        estimator=args.estimator,
        smooth_width=args.smooth_width,
        threads=args.threads,
    )
    csv_text = bench.emit_csv(bench.run_sweep(image, cfg))
    if args.output == "-":
        sys.stdout.write(csv_text)
    else:
        Path(args.output).write_text(csv_text)
    return 0


def _cmd_anglemap(args) -> int:
    image = _load_image(args.input)
    cfg = _codec_config(args, CodecMode(args.mode), args.n)
    Path(args.output).write_bytes(imageio.save_pgm(bench.angle_map(image, cfg)))
    return 0


def _format_table(values: np.ndarray) -> str:
    return "\n".join("  ".join(f"{v:8.2f}" for v in row) for row in values)


def _cmd_demo(args) -> int:
    for angle in _parse_ints(args.angles):
        block, coeffs = bench.step_edge_demo(float(angle))
        log_mag = np.log10(np.maximum(np.abs(coeffs), 1e-12))
        print(f"step edge at {angle} degrees")
        print(_format_table(block))
        print("log10 |coefficients|")
        print(_format_table(log_mag))
        significant = int(np.sum(np.abs(coeffs) > 1e-9))
        print(f"coefficients above 1e-9: {significant}")
        print()
    return 0


_COMMANDS = {
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "psnr": _cmd_psnr,
    "sweep": _cmd_sweep,
    "anglemap": _cmd_anglemap,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"rotdct: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"rotdct: {exc}", file=sys.stderr)
        return 1
    except (RotDctError, OSError) as exc:
        print(f"rotdct: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main(sys.argv[1:]))
