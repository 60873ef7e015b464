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

import numpy as np
import pytest

from app.errors import SchemaError, ShapeError
from app.gauge import scan_partial_isometries
from app.generator import classify
from app.polar import polar_decompose
from app.sampling import commutative_contraction_generator, random_generator
from app.semigroups import StepFunction
from app.serialization import (
    classification_from_dict,
    classification_to_dict,
    decode_complex,
    decode_matrix,
    dumps,
    gauge_input_from_dict,
    generator_from_dict,
    generator_to_dict,
    loads,
    matelem_input_from_dict,
    polar_pair_from_dict,
    polar_pair_to_dict,
    scan_report_from_dict,
    scan_report_to_dict,
    step_function_to_dict,
)


def test_generator_json_is_bit_exact(rng):
    """
    GIVEN a random generator with entries that have no short decimal form
    WHEN it is written and read back through JSON text
    THEN every float is restored bit for bit
    """
    F = random_generator(rng, 2, 2)
    G = generator_from_dict(loads(dumps(generator_to_dict(F))))

    assert (G.dim_h, G.dim_k) == (2, 2)
    for name in "ABCD":
        assert np.array_equal(getattr(G, name), getattr(F, name))


def test_generator_schema(weyl):
    """
    GIVEN the Weyl generator as JSON
    WHEN it is encoded
    THEN the documented layout is produced with D stored as D itself
    """
    obj = generator_to_dict(weyl)
    assert obj == {
        "dim_h": 1,
        "dim_k": 1,
        "A": [[[-0.5, 0.0]]],
        "B": [[[-1.0, 0.0]]],
        "C": [[[1.0, 0.0]]],
        "D": [[[1.0, 0.0]]],
    }
    assert dumps(obj).endswith("}\n")


def test_reports_roundtrip(rng, rotation_column):
    """
    GIVEN a classification report, a polar pair and a scan report
    WHEN they are written and read back
    THEN the reports are equal to the originals
    """
    F = commutative_contraction_generator(rng, 2, 1)

    report = classify(F)
    restored = classification_from_dict(loads(dumps(classification_to_dict(report))))
    assert restored.records == report.records
    assert restored.tol == report.tol

    pair = polar_decompose(F)
    restored = polar_pair_from_dict(loads(dumps(polar_pair_to_dict(pair))))
    assert restored.residuals == pair.residuals
    assert np.array_equal(restored.E.full, pair.E.full)
    assert np.array_equal(restored.K, pair.K)

    scan = scan_partial_isometries(rotation_column, 3, 2, 1)
    assert scan_report_from_dict(loads(dumps(scan_report_to_dict(scan)))) == scan


def test_matelem_and_gauge_inputs(weyl):
    """
    GIVEN matrix-element and gauge inputs
    WHEN they are decoded
    THEN the generator, step functions and D are recovered, with a full generator accepted for gauge
    """
    f = StepFunction(((0.5, [1.0]), (0.5, [0.5j])))
    obj = {"generator": generator_to_dict(weyl), "f": step_function_to_dict(f), "g": step_function_to_dict(f)}
    F, f_read, g_read = matelem_input_from_dict(loads(dumps(obj)))
    assert np.array_equal(F.full, weyl.full)
    assert f_read.horizon == 1.0
    assert g_read.segments[1][1][0] == 0.5j

    D, dim_h, dim_k = gauge_input_from_dict(generator_to_dict(weyl))
    assert (dim_h, dim_k) == (1, 1) and D[0, 0] == 1.0

    D, dim_h, dim_k = gauge_input_from_dict({"dim_h": 1, "dim_k": 2, "D": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]})
    assert (dim_h, dim_k) == (1, 2)
    assert np.array_equal(D, [[0, 1], [0, 0]])


def test_schema_errors(weyl):
    """
    GIVEN malformed JSON documents
    WHEN they are decoded
    THEN SchemaError (or ShapeError for well-formed blocks of the wrong size) is raised
    """
    with pytest.raises(SchemaError):
        loads("{not json")
    with pytest.raises(SchemaError):
        decode_complex([1.0])
    with pytest.raises(SchemaError):
        decode_complex([True, 0.0])
    with pytest.raises(SchemaError):
        decode_matrix([[[1, 0]], [[1, 0], [2, 0]]])

    obj = generator_to_dict(weyl)
    del obj["C"]
    with pytest.raises(SchemaError):
        generator_from_dict(obj)

    obj = generator_to_dict(weyl)
    obj["dim_k"] = 2
    with pytest.raises(ShapeError):
        generator_from_dict(obj)

    with pytest.raises(SchemaError):
        generator_from_dict(json.loads('["A", "B"]'))
