# This file is part of Cocycle Lab.
#
# Cocycle Lab is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# Cocycle Lab is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with Cocycle Lab.  If not, see <https://www.gnu.org/licenses/>.

import json
import math

import numpy as np
import pytest

from app import create_app
from app.gauge import truncated_left_shift
from app.generator import Generator
from app.sampling import SplitMix64
from app.serialization import generator_to_dict
from config import Config


class TestConfig(Config):
    TESTING = True
    COCYCLE_LAB_TOL = 1e-9
    COCYCLE_LAB_RANK_TOL = 1e-9
    GAUGE_DIM_BUDGET = 4096
    GAUGE_N_MAX = 4
    VERIFY_SEED = 0
    VERIFY_TRIALS = 2
    REPORT_FORMAT = "text"
    LOG_LEVEL = "WARNING"


@pytest.fixture
def app():
    """Create and configure a new app instance for each test."""
    app = create_app(TestConfig)

    with app.app_context():
        yield app


@pytest.fixture
def runner(app):
    """A CLI runner for the lab commands."""
    return app.test_cli_runner()


@pytest.fixture
def rng():
    return SplitMix64(20240601)


@pytest.fixture
def weyl():
    """Generator of the Weyl cocycle: unitary, not self-adjoint."""
    return Generator(1, 1, [[-0.5]], [[-1.0]], [[1.0]], [[1.0]])


@pytest.fixture
def projection():
    """[[-1, 1], [1, -1]] on C + C, the generator of a projection cocycle."""
    return Generator(1, 1, [[-1.0]], [[1.0]], [[1.0]], [[0.0]])


@pytest.fixture
def noncommuting_unitary():
    """F = F* with chi(F) = 0 whose components C and D do not commute."""
    C = np.array([[1.0, 0.0], [-1.0, 0.0]])
    D = np.array([[0.0, 1.0], [1.0, 0.0]])
    return Generator(2, 1, -0.5 * C.T @ C, C.T, C, D)


@pytest.fixture
def rotation_column():
    """D = [[cos, 0], [sin, 0]] at pi/4: a partial isometry whose square is not one."""
    c = s = math.cos(math.pi / 4)
    return np.array([[c, 0.0], [s, 0.0]])


@pytest.fixture
def shift():
    """Nilpotent truncation of the left shift on C^4."""
    return truncated_left_shift(4)


@pytest.fixture
def write_json(tmp_path):
    """Writes an object as JSON to a temporary file and returns its path."""

    def _write(obj, name="input.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def generator_file(write_json):
    def _write(F, name="generator.json"):
        return write_json(generator_to_dict(F), name)

    return _write
