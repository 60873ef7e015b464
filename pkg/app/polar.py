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

"""
Polar decomposition of a contraction generator with commuting components:
F = E + G + E Delta G where E generates a partial isometry-valued cocycle and
G = chi(F)_(1/2) a positive contraction cocycle.

With X = B + C* D and f, g the half-power functions evaluated at |D|^2:

    G = [[ (A + A* + C*C)/2 + X f X*,  X g ], [ g X*,  |D| - I ]]
    E = [[ K, L ], [ M, N - I ]]

    N |D| = D
    L = -C* N + X g
    M = C - N g X*
    K = (A - A* - C*C)/2 - X f X* - L g X*
"""

from dataclasses import dataclass, field

import numpy as np

from app.errors import DomainError, NotCommutative, NotContraction
from app.generator import Generator, chi, commutes_componentwise, compose, pi_map, scale
from app.numkit import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    is_partial_isometry,
    is_psd,
    opnorm,
    polar_spectrum,
    psd_sqrt,
    spectral_function,
)
from app.powerflow import f_alpha, g_alpha

RESIDUAL_NAMES = ("reconstruction", "pi_of_E", "N_partial_isometry", "initial_space", "defect")


@dataclass(frozen=True)
class PolarPair:
    E: Generator
    G: Generator
    N: np.ndarray
    L: np.ndarray
    M: np.ndarray
    K: np.ndarray
    residuals: dict = field(default_factory=dict)

    def passes(self, threshold):
        return all(value <= threshold for value in self.residuals.values())


@dataclass(frozen=True)
class _HalfPowerData:
    X: np.ndarray
    N: np.ndarray
    modulus: np.ndarray
    f_half: np.ndarray
    g_half: np.ndarray


def _require_commutative_contraction(F, tol):
    contraction = is_psd(-chi(F), tol)
    if not contraction.holds:
        raise NotContraction(f"chi(F) is not negative: greatest eigenvalue {-contraction.witness:.3e}")
    commutation = commutes_componentwise(F, True, tol)
    if not commutation.holds:
        pair = " and ".join(commutation.failing_pair)
        raise NotCommutative(f"components {pair} do not commute (residual {commutation.witness:.3e})")


def _half_power_data(F, tol, rank_tol, N=None):
    _require_commutative_contraction(F, tol)
    canonical, modulus, spectrum = polar_spectrum(F.D, rank_tol)
    if N is None:
        N = canonical
    else:
        N = as_matrix(N)
        if N.shape != F.D.shape or opnorm(N @ modulus - F.D) > tol * scale(F):
            raise DomainError("supplied N does not satisfy N |D| = D")

    def half(fn):
        return spectral_function(spectrum, lambda t: fn(t, 0.5), domain=(0.0, 1.0), slack=tol * scale(F))

    return _HalfPowerData(
        X=F.B + adjoint(F.C) @ F.D,
        N=N,
        modulus=modulus,
        f_half=half(f_alpha),
        g_half=half(g_alpha),
    )


def _positive_part(F, data):
    X, f, g = data.X, data.f_half, data.g_half
    return Generator(
        F.dim_h,
        F.dim_k,
        0.5 * (F.A + adjoint(F.A) + adjoint(F.C) @ F.C) + X @ f @ adjoint(X),
        X @ g,
        g @ adjoint(X),
        data.modulus,
    )


def _isometric_blocks(F, data, L):
    """K from the chosen L; M does not depend on L."""
    X, f, g, N = data.X, data.f_half, data.g_half, data.N
    M = F.C - N @ g @ adjoint(X)
    K = 0.5 * (F.A - adjoint(F.A) - adjoint(F.C) @ F.C) - X @ f @ adjoint(X) - L @ g @ adjoint(X)
    return K, M


def _pi_conditions(N, L, M, K):
    identity = np.eye(N.shape[0])
    return {
        "N_partial_isometry": is_partial_isometry(N).witness,
        "initial_space": opnorm(adjoint(M) @ N + L @ adjoint(N) @ N),
        "defect": opnorm(K + adjoint(K) + adjoint(M) @ M + L @ (identity - adjoint(N) @ N) @ adjoint(L)),
    }


def positive_part_generator(F, tol=DEFAULT_TOL, rank_tol=DEFAULT_RANK_TOL):
    """G = chi(F)_(1/2), the generator of the positive contraction factor."""
    return _positive_part(F, _half_power_data(F, tol, rank_tol))


def partial_isometry_part_generator(F, tol=DEFAULT_TOL, rank_tol=DEFAULT_RANK_TOL, N=None):
    """E = [[K, L], [M, N - I]]; ``N`` defaults to the canonical polar part of D."""
    data = _half_power_data(F, tol, rank_tol, N)
    L = -adjoint(F.C) @ data.N + data.X @ data.g_half
    K, M = _isometric_blocks(F, data, L)
    return Generator(F.dim_h, F.dim_k, K, L, M, data.N)


def polar_decompose(F, tol=DEFAULT_TOL, rank_tol=DEFAULT_RANK_TOL, N=None):
    data = _half_power_data(F, tol, rank_tol, N)
    G = _positive_part(F, data)
    L = -adjoint(F.C) @ data.N + data.X @ data.g_half
    K, M = _isometric_blocks(F, data, L)
    E = Generator(F.dim_h, F.dim_k, K, L, M, data.N)

    residuals = {
        "reconstruction": opnorm(compose(E, G).full - F.full),
        "pi_of_E": opnorm(pi_map(E)),
        **_pi_conditions(data.N, L, M, K),
    }
    return PolarPair(E=E, G=G, N=data.N, L=L, M=M, K=K, residuals={name: residuals[name] for name in RESIDUAL_NAMES})


def truncated_pi_conditions(F, tol=DEFAULT_TOL, rank_tol=DEFAULT_RANK_TOL):
    """
    The three partial-isometry conditions when L is cut down to L N*N and K is
    recomputed from it. The defect condition then fails whenever the noise
    leaks into the kernel of D.
    """
    data = _half_power_data(F, tol, rank_tol)
    L = -adjoint(F.C) @ data.N + data.X @ data.g_half
    truncated = L @ adjoint(data.N) @ data.N
    K, M = _isometric_blocks(F, data, truncated)
    return _pi_conditions(data.N, truncated, M, K)


def scalar_noise_contraction_generator(D, mu, nu, v, w):
    """
    The contraction generator on h = C with noise blocks D, v and a
    coupling of strength nu along w:

        [[ i mu - (nu^2 + |v|^2)/2,  < nu (I - D*D)^(1/2) w - D* v | ],
         [ | v >,                    D - I ]]
    """
    D = as_matrix(D)
    m = D.shape[0]
    v = np.array(v, dtype=complex).reshape(m)
    w = np.array(w, dtype=complex).reshape(m)
    if nu < 0:
        raise DomainError(f"coupling strength must be non-negative, got {nu}")
    if opnorm(D) > 1.0 + DEFAULT_TOL or np.linalg.norm(w) > 1.0 + DEFAULT_TOL:
        raise NotContraction("D and w must both be contractive")

    defect = psd_sqrt(np.eye(m) - adjoint(D) @ D)
    row = nu * (defect @ w) - adjoint(D) @ v
    A = np.array([[1j * mu - 0.5 * (nu**2 + np.vdot(v, v).real)]])
    return Generator(1, m, A, np.conj(row)[None, :], v[:, None], D)
