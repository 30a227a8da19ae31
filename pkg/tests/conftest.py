import json

import numpy as np
import pytest

from models.grid import Grid, GridFunction
from utils.rng import make_rng


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture
def grid3():
    return Grid.centered(3, 9)


@pytest.fixture
def paraboloid3(grid3):
    """|x|²/2 on the 3-d grid, the σ₂/σ₁ = 1 reference solution"""
    x = grid3.points()
    return GridFunction(grid3, 0.5 * np.sum(x * x, axis=-1))


@pytest.fixture
def write_config(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return write
