from pathlib import Path

import numpy as np
import pytest

from rotdct import load_pgm

ASSETS = Path(__file__).resolve().parent.parent / "assets"


@pytest.fixture(scope="session")
def natural_image():
    return load_pgm((ASSETS / "camera.pgm").read_bytes())


@pytest.fixture(scope="session")
def synthetic_image():
    return load_pgm((ASSETS / "edges45.pgm").read_bytes())


@pytest.fixture()
def rng():
    return np.random.default_rng(20240117)
