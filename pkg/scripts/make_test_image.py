#!/usr/bin/env python3
"""Regenerate the checked-in test images under assets/.

assets/camera.pgm is the classic 512x512 "cameraman" photograph as
shipped with scikit-image (skimage.data.camera, CC0/public-domain test
image), converted losslessly to binary PGM. It has strong oriented
edges (tripod, coat, camera body) on a smooth background, which is what
the rate-distortion comparison needs.

assets/edges45.pgm is the synthetic 45-degree stripe image produced by
rotdct.bench.synthetic_edge_image with the default parameters used by
the test suite.

Run from the repository root after `pip install -e .`:

    python3 scripts/make_test_image.py
"""

from pathlib import Path

import numpy as np

from rotdct import bench, imageio


def main():
    assets = Path(__file__).resolve().parent.parent / "assets"
    assets.mkdir(exist_ok=True)

    try:
        from skimage import data
    except ImportError:
        raise SystemExit("scikit-image is required to regenerate assets/camera.pgm")

    camera = data.camera().astype(np.float64)
    (assets / "camera.pgm").write_bytes(imageio.save_pgm(imageio.GrayImage(camera)))
    print(f"wrote {assets / 'camera.pgm'} ({camera.shape[1]}x{camera.shape[0]})")

    edges = bench.synthetic_edge_image(45.0, size=128, period=24.0)
    (assets / "edges45.pgm").write_bytes(imageio.save_pgm(edges))
    print(f"wrote {assets / 'edges45.pgm'} ({edges.width}x{edges.height})")


if __name__ == "__main__":
    main()
