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

import itertools

import numpy as np
import pytest

from app.errors import BudgetExceeded, DimMismatch, ShapeError, WrongNoiseDim
from app.gauge import (
    CYCLIC_NOTE,
    NILPOTENT_NOTE,
    is_power_partial_isometry,
    leg_permutation,
    lift_level,
    lift_order_residual,
    lifted_product,
    scan_partial_isometries,
    truncated_left_shift,
    truncation_note,
)
from app.generator import Generator, classify
from app.numkit import is_partial_isometry, opnorm
from app.sampling import random_unitary


def test_lift_level_examples(rng):
    """
    GIVEN a random D on h (x) k
    WHEN it is lifted to one and several levels
    THEN one level gives D, the identity lifts to the identity and one-dimensional noise gives D at every level
    """
    D = rng.complex_normals((4, 4))
    assert np.array_equal(lift_level(D, 1, 1, 2, 2), D)
    assert np.array_equal(lift_level(np.eye(4), 2, 3, 2, 2), np.eye(16))

    D = rng.complex_normals((3, 3))
    for j in (1, 2, 3):
        assert np.array_equal(lift_level(D, j, 3, 3, 1), D)


def test_lift_level_acts_on_the_right_leg():
    """
    GIVEN D = I (x) X on C^1 (x) C^2 with X a flip
    WHEN it is lifted to the second of two levels
    THEN the result is I (x) X with the flip on the second copy only
    """
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    lifted = lift_level(X, 2, 2, 1, 2)
    assert np.array_equal(lifted, np.kron(np.eye(2), X))
    assert np.array_equal(lift_level(X, 1, 2, 1, 2), np.kron(X, np.eye(2)))


def test_lift_level_errors(rng):
    """
    GIVEN a level index out of range, a D of the wrong size and a dimension above the budget
    WHEN a lift is requested
    THEN ShapeError, DimMismatch and BudgetExceeded are raised
    """
    D = rng.complex_normals((4, 4))
    with pytest.raises(ShapeError):
        lift_level(D, 3, 2, 2, 2)
    with pytest.raises(DimMismatch):
        lift_level(D, 1, 1, 2, 3)
    with pytest.raises(BudgetExceeded):
        lift_level(D, 1, 12, 2, 2)
    with pytest.raises(BudgetExceeded):
        scan_partial_isometries(D, 3, 2, 2, budget=8)


def test_lifted_product_examples(rng, rotation_column):
    """
    GIVEN one-dimensional noise and a unitary D
    WHEN the lifted product is formed
    THEN it is the ordinary power, and a unitary again
    """
    assert np.allclose(lifted_product(rotation_column, 3, 2, 1), np.linalg.matrix_power(rotation_column, 3))

    U = random_unitary(rng, 4)
    product = lifted_product(U, 3, 2, 2)
    assert opnorm(product.conj().T @ product - np.eye(16)) <= 1e-12


def test_scan_rotation_column(rotation_column):
    """
    GIVEN D = [[cos, 0], [sin, 0]] at pi/4 on h = C^2 with k = C
    WHEN levels up to 3 are scanned
    THEN level 1 passes and level 2 is the first failure
    """
    report = scan_partial_isometries(rotation_column, 3, 2, 1)
    assert report.levels[0].passes
    assert report.first_failure == 2
    assert report.levels[1].residual > 0.1
    assert report.summary == "fails at level 2"

    power = is_power_partial_isometry(rotation_column, 3)
    assert power.first_failure == 2
    for tensor_level, power_level in zip(report.levels, power.levels):
        assert tensor_level.residual == pytest.approx(power_level.residual, abs=1e-12)


def test_level_one_is_not_enough(rotation_column):
    """
    GIVEN the pure-gauge generator built from the rotated column
    WHEN it is classified and scanned
    THEN D is a partial isometry while D^(2) is not
    """
    F = Generator(2, 1, np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)), rotation_column)
    assert classify(F).holds("contraction")
    assert is_partial_isometry(F.D).holds
    assert scan_partial_isometries(F.D, 2, 2, 1).first_failure == 2


def test_scan_shift_and_unitaries(shift, rng):
    """
    GIVEN the truncated shift and a random unitary
    WHEN levels up to 3 are scanned
    THEN every level passes and the report only claims the scanned range
    """
    report = scan_partial_isometries(shift, 3, 1, 4)
    assert report.first_failure is None
    assert report.summary == "passes up to n_max = 3"

    report = scan_partial_isometries(random_unitary(rng, 4), 3, 2, 2)
    assert all(level.passes for level in report.levels)


def test_power_partial_isometry_examples(rng):
    """
    GIVEN a unitary, a projection and noise of the wrong dimension
    WHEN powers are scanned
    THEN unitaries and projections pass and WrongNoiseDim is raised otherwise
    """
    assert is_power_partial_isometry(random_unitary(rng, 3), 4).first_failure is None
    assert is_power_partial_isometry(np.diag([1.0, 0.0]), 4).first_failure is None
    with pytest.raises(WrongNoiseDim):
        is_power_partial_isometry(np.eye(2), 2, dim_k=2)


def test_leg_permutation_reorders_lifts(rng):
    """
    GIVEN a random D on C^2 (x) C^2 and every permutation of three legs
    WHEN D^(3) is conjugated by the leg permutation
    THEN it equals the product taken in the permuted order
    """
    D = rng.complex_normals((4, 4))
    for perm in itertools.permutations((1, 2, 3)):
        P = leg_permutation(perm, 2, 2)
        assert opnorm(P.conj().T @ P - np.eye(16)) <= 1e-15
        assert lift_order_residual(D, perm, 2, 2) <= 1e-12 * (1.0 + opnorm(D)) ** 3

    with pytest.raises(ShapeError):
        leg_permutation((1, 1, 2), 2, 2)


def test_truncated_shift_notes():
    """
    GIVEN the nilpotent and cyclic truncations of the left shift
    WHEN their notes are looked up
    THEN each carries its caveat and other operators carry none
    """
    shift = truncated_left_shift(3)
    assert np.array_equal(shift, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    cyclic = truncated_left_shift(3, cyclic=True)
    assert cyclic[2, 0] == 1.0

    assert truncation_note(shift, 1, 3) == NILPOTENT_NOTE
    assert truncation_note(cyclic, 1, 3) == CYCLIC_NOTE
    assert truncation_note(np.eye(3), 1, 3) == ""
    assert truncation_note(np.eye(4), 2, 2) == ""

    with pytest.raises(ShapeError):
        truncated_left_shift(0)
