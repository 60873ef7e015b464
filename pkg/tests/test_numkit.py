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

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import DimMismatch, DomainError, DominationFailed, NoConvergence, NotHermitian, ShapeError
from app.numkit import (
    apply_scalar_function,
    contraction_factor,
    herm_eig,
    is_partial_isometry,
    is_psd,
    mat_exp,
    opnorm,
    polar_part,
    polar_spectrum,
    psd_sqrt,
    singular_support,
)
from app.sampling import SplitMix64, random_contraction, random_hermitian

seeds = st.integers(min_value=0, max_value=2**64 - 1)
sizes = st.integers(min_value=1, max_value=6)


def test_herm_eig_small_examples():
    """
    GIVEN Hermitian matrices with spectra known by hand
    WHEN they are decomposed
    THEN the eigenvalues come back in ascending order
    """
    assert np.allclose(herm_eig(np.eye(2)).eigenvalues, [1.0, 1.0])
    assert np.allclose(herm_eig([[-1.0, 1.0], [1.0, -1.0]]).eigenvalues, [-2.0, 0.0], atol=1e-14)

    spectrum = herm_eig(np.diag([0.25, 1.0]))
    assert np.allclose(spectrum.eigenvalues, [0.25, 1.0])
    assert np.allclose(spectrum.basis, np.eye(2))


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=sizes)
def test_herm_eig_reconstructs(seed, n):
    """
    GIVEN a random Hermitian matrix
    WHEN it is decomposed
    THEN U diag(lambda) U* reproduces it and U is unitary
    """
    M = random_hermitian(SplitMix64(seed), n, scale=3.0)
    spectrum = herm_eig(M)

    assert opnorm(spectrum.reconstruct() - M) <= 1e-10 * (1.0 + opnorm(M))
    assert opnorm(spectrum.basis.conj().T @ spectrum.basis - np.eye(n)) <= 1e-10
    assert np.all(np.diff(spectrum.eigenvalues) >= 0)


def test_herm_eig_errors():
    """
    GIVEN inputs that are not Hermitian, not square or not finite, and a zero sweep budget
    WHEN they are decomposed
    THEN the matching error is raised
    """
    with pytest.raises(NotHermitian):
        herm_eig([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(DimMismatch):
        herm_eig(np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        herm_eig([[np.nan]])
    with pytest.raises(NoConvergence):
        herm_eig([[0.0, 1.0], [1.0, 0.0]], max_sweeps=0)


def test_mat_exp_examples():
    """
    GIVEN the zero matrix and a diagonal matrix
    WHEN they are exponentiated
    THEN the closed forms are returned
    """
    assert np.allclose(mat_exp(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(mat_exp(np.diag([1.0, -1.0])), np.diag([math.e, 1.0 / math.e]), rtol=1e-14)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, norm=st.floats(min_value=0.01, max_value=50.0))
def test_mat_exp_matches_spectral_oracle(seed, norm):
    """
    GIVEN a random 4 x 4 Hermitian matrix of norm up to 50
    WHEN it is exponentiated
    THEN the result agrees with U exp(Lambda) U* to 1e-10
    """
    H = random_hermitian(SplitMix64(seed), 4)
    H *= norm / opnorm(H)
    spectrum = herm_eig(H)
    oracle = (spectrum.basis * np.exp(spectrum.eigenvalues)) @ spectrum.basis.conj().T

    assert opnorm(mat_exp(H) - oracle) <= 1e-10 * opnorm(oracle)


def test_is_psd_witnesses():
    """
    GIVEN the identity, an indefinite matrix and zero
    WHEN positivity is tested
    THEN the verdict and least eigenvalue are reported
    """
    verdict = is_psd(np.eye(2))
    assert verdict.holds and verdict.witness == pytest.approx(1.0)

    verdict = is_psd([[0.0, -1.0], [-1.0, -1.0]])
    assert not verdict.holds
    assert verdict.witness == pytest.approx(-(1.0 + math.sqrt(5.0)) / 2.0)

    verdict = is_psd(np.zeros((2, 2)))
    assert verdict.holds and verdict.witness == 0.0


def test_is_partial_isometry(rotation_column):
    """
    GIVEN a unitary, the rotated column and its square
    WHEN they are tested for V V* V = V
    THEN only the square fails, with a residual above 0.1
    """
    theta = 0.3
    U = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    assert is_partial_isometry(U).holds
    assert is_partial_isometry(rotation_column).holds

    verdict = is_partial_isometry(rotation_column @ rotation_column)
    assert not verdict.holds
    assert verdict.witness > 0.1


def test_apply_scalar_function_examples():
    """
    GIVEN Hermitian matrices and scalar functions
    WHEN the functional calculus is applied
    THEN it matches the hand computation
    """
    M = np.array([[2.0, 1.0j], [-1.0j, 3.0]])
    assert np.allclose(apply_scalar_function(M, lambda t: t), M)
    assert np.allclose(apply_scalar_function([[0.0, 1.0], [1.0, 0.0]], lambda t: t**2), np.eye(2))
    assert np.allclose(psd_sqrt(np.diag([0.25, 1.0])), np.diag([0.5, 1.0]))


def test_apply_scalar_function_domain():
    """
    GIVEN eigenvalues slightly and clearly outside [0, 1]
    WHEN a function on [0, 1] is applied
    THEN the first are clamped and the second raise DomainError
    """
    nearly = np.diag([-1e-13, 1.0 + 1e-13])
    assert np.allclose(apply_scalar_function(nearly, np.sqrt, domain=(0.0, 1.0)), np.diag([0.0, 1.0]))

    with pytest.raises(DomainError):
        apply_scalar_function(np.diag([-0.1, 0.5]), np.sqrt, domain=(0.0, 1.0))


def test_contraction_factor_examples():
    """
    GIVEN S = T, S = 0 and S = T / 2
    WHEN the contraction W with S = W T is built
    THEN W is the range projection, zero and I / 2 respectively
    """
    T = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert np.allclose(contraction_factor(T, T), np.diag([1.0, 0.0]))

    T = np.array([[2.0, 1.0], [0.0, 1.0]])
    assert np.allclose(contraction_factor(np.zeros((2, 2)), T), np.zeros((2, 2)))
    assert np.allclose(contraction_factor(0.5 * T, T), 0.5 * np.eye(2))


def test_contraction_factor_random(rng):
    """
    GIVEN S = K T with K a random contraction and T of deficient rank
    WHEN the contraction factor is built
    THEN ||W|| <= 1 and W T = S
    """
    T = rng.complex_normals((3, 3))
    T[:, 2] = T[:, 0]
    S = random_contraction(rng, 2, 3) @ T

    W = contraction_factor(S, T)
    assert opnorm(W) <= 1.0 + 1e-8
    assert opnorm(S - W @ T) <= 1e-8 * (1.0 + opnorm(S))


def test_contraction_factor_errors():
    """
    GIVEN S not dominated by T and S, T on different domains
    WHEN a contraction factor is requested
    THEN DominationFailed and DimMismatch are raised
    """
    with pytest.raises(DominationFailed):
        contraction_factor(2.0 * np.eye(2), np.eye(2))
    with pytest.raises(DimMismatch):
        contraction_factor(np.eye(2), np.eye(3))


def test_polar_part_examples():
    """
    GIVEN a unitary, zero and the nilpotent 2 x 2 shift
    WHEN the polar part is taken
    THEN N |D| = D with the expected N and |D|
    """
    U = np.array([[0.0, 1.0j], [1.0j, 0.0]])
    N, modulus = polar_part(U)
    assert np.allclose(N, U) and np.allclose(modulus, np.eye(2))

    N, modulus = polar_part(np.zeros((2, 2)))
    assert np.allclose(N, 0.0) and np.allclose(modulus, 0.0)

    D = np.array([[0.0, 1.0], [0.0, 0.0]])
    N, modulus = polar_part(D)
    assert np.allclose(modulus, np.diag([0.0, 1.0]))
    assert np.allclose(N, D)
    assert is_partial_isometry(N).holds


def test_small_singular_values_are_kept():
    """
    GIVEN D = diag(1, 1e-5), whose square 1e-10 lies below the rank tolerance
    WHEN the polar part and the contraction factor of D with itself are built
    THEN the singular value 1e-5 still counts and both factorisations hold to the tolerance
    """
    rank_tol = 1e-9
    D = np.diag([1.0, 1e-5])
    assert singular_support(np.array([1.0, 1e-5]), rank_tol).tolist() == [True, True]
    assert singular_support(np.array([1.0, 1e-10]), rank_tol).tolist() == [True, False]

    N, modulus = polar_part(D, rank_tol)
    assert opnorm(N @ modulus - D) <= 10 * rank_tol * (1.0 + opnorm(D))
    assert np.allclose(N, np.eye(2))
    assert is_partial_isometry(N).holds

    W = contraction_factor(D, D, rank_tol)
    assert opnorm(D - W @ D) <= 10 * rank_tol * (1.0 + opnorm(D))
    assert np.allclose(W, np.eye(2))


def test_polar_spectrum_matches_gram_matrix(rng):
    """
    GIVEN a random contraction with a zero column
    WHEN its polar data is computed from one decomposition
    THEN the spectrum reconstructs D*D in ascending order and |D| squares to D*D
    """
    D = random_contraction(rng, 3, 3)
    D[:, 2] = 0.0
    N, modulus, spectrum = polar_spectrum(D)

    gram = D.conj().T @ D
    assert np.all(np.diff(spectrum.eigenvalues) >= 0.0)
    assert spectrum.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
    assert opnorm(spectrum.reconstruct() - gram) <= 1e-12
    assert opnorm(modulus @ modulus - gram) <= 1e-12
    assert opnorm(N @ modulus - D) <= 1e-12
