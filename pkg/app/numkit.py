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
from dataclasses import dataclass

import numpy as np

from app.errors import DimMismatch, DomainError, DominationFailed, NoConvergence, NotHermitian, ShapeError

DEFAULT_TOL = 1e-9
DEFAULT_RANK_TOL = 1e-9
MAX_SWEEPS = 30

# Off-diagonal Frobenius mass, relative to the whole matrix, at which a Jacobi sweep stops.
OFF_DIAGONAL_RTOL = 1e-13
TAYLOR_DEGREE = 18
SCALED_NORM = 0.5


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the unitary whose columns are the eigenvectors."""

    eigenvalues: np.ndarray
    basis: np.ndarray

    def reconstruct(self):
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


@dataclass(frozen=True)
class Verdict:
    """A boolean test result together with the number that decided it."""

    holds: bool
    witness: float


def as_matrix(M):
    """Returns ``M`` as a finite two-dimensional complex array."""
    arr = np.array(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ShapeError(f"expected a non-empty matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError("matrix has non-finite entries")
    return arr


def _square(M):
    arr = as_matrix(M)
    if arr.shape[0] != arr.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def opnorm(M):
    """Operator (spectral) norm."""
    return float(np.linalg.norm(M, 2))


def adjoint(M):
    return np.conj(M).T


def hermitian_part(M):
    return 0.5 * (M + adjoint(M))


def _rotate(work, basis, p, q):
    """One complex Jacobi rotation annihilating work[p, q]."""
    b = work[p, q]
    magnitude = abs(b)
    if magnitude == 0.0:
        return
    phase = b / magnitude
    theta = 0.5 * math.atan2(2.0 * magnitude, work[q, q].real - work[p, p].real)
    c, s = math.cos(theta), math.sin(theta)
    # Right multiplication by [[c, s], [u, v]] on columns p, q; its adjoint acts on rows.
    u, v = -s * np.conj(phase), c * np.conj(phase)

    for target in (work, basis):
        col_p, col_q = target[:, p].copy(), target[:, q].copy()
        target[:, p] = c * col_p + u * col_q
        target[:, q] = s * col_p + v * col_q
    row_p, row_q = work[p, :].copy(), work[q, :].copy()
    work[p, :] = c * row_p + np.conj(u) * row_q
    work[q, :] = s * row_p + np.conj(v) * row_q
    work[p, q] = work[q, p] = 0.0
    work[p, p] = work[p, p].real
    work[q, q] = work[q, q].real


def _off_diagonal_norm(work):
    return float(np.linalg.norm(work - np.diag(np.diag(work))))


def herm_eig(M, tol=DEFAULT_TOL, max_sweeps=MAX_SWEEPS):
    """
    Spectral decomposition of a Hermitian matrix by cyclic Jacobi rotations.
    Raises NotHermitian when ``M`` is not Hermitian within ``tol`` and
    NoConvergence when ``max_sweeps`` sweeps do not diagonalise it.
    """
    M = _square(M)
    size = M.shape[0]
    asymmetry = opnorm(M - adjoint(M))
    if asymmetry > tol * (1.0 + opnorm(M)):
        raise NotHermitian(f"matrix is not Hermitian: ||M - M*|| = {asymmetry:.3e}")

    work = hermitian_part(M)
    basis = np.eye(size, dtype=complex)
    threshold = OFF_DIAGONAL_RTOL * float(np.linalg.norm(work))
    # Entries below this are left alone; all of them together stay under the stopping threshold.
    negligible = threshold / size

    for sweep in range(max_sweeps + 1):
        if _off_diagonal_norm(work) <= threshold:
            break
        if sweep == max_sweeps:
            raise NoConvergence(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
        for p in range(size - 1):
            for q in range(p + 1, size):
                if abs(work[p, q]) > negligible:
                    _rotate(work, basis, p, q)

    eigenvalues = np.real(np.diag(work)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return SpectralDecomposition(eigenvalues=eigenvalues[order], basis=basis[:, order])


def mat_exp(M):
    """Matrix exponential by scaling and squaring around a truncated Taylor kernel."""
    M = _square(M)
    identity = np.eye(M.shape[0], dtype=complex)
    norm = float(np.linalg.norm(M, 1))
    squarings = 0 if norm <= SCALED_NORM else int(math.ceil(math.log2(norm / SCALED_NORM)))
    scaled = M / 2.0**squarings

    result = identity.copy()
    for k in range(TAYLOR_DEGREE, 0, -1):
        result = identity + (scaled @ result) / k
    for _ in range(squarings):
        result = result @ result
    return result


def is_psd(M, tol=DEFAULT_TOL):
    """Positive semidefiniteness with the least eigenvalue as witness."""
    spectrum = herm_eig(M, tol)
    lowest = float(spectrum.eigenvalues[0])
    norm = float(np.max(np.abs(spectrum.eigenvalues)))
    return Verdict(holds=lowest >= -tol * (1.0 + norm), witness=lowest)


def is_partial_isometry(V, tol=DEFAULT_TOL):
    """Tests V V* V = V; the witness is the residual norm."""
    V = as_matrix(V)
    residual = opnorm(V @ adjoint(V) @ V - V)
    return Verdict(holds=residual <= tol * (1.0 + opnorm(V)), witness=residual)


def _clamp_to_domain(eigenvalues, domain, slack):
    if domain is None:
        return eigenvalues
    low, high = domain
    if np.any(eigenvalues < low - slack) or np.any(eigenvalues > high + slack):
        raise DomainError(
            f"spectrum [{eigenvalues.min():.6g}, {eigenvalues.max():.6g}] leaves the domain [{low}, {high}]"
        )
    return np.clip(eigenvalues, low, high)


def spectral_function(spectrum, fn, domain=None, slack=0.0):
    """U diag(fn(eigenvalues)) U* for an existing decomposition; ``fn`` acts on arrays."""
    eigenvalues = _clamp_to_domain(spectrum.eigenvalues, domain, slack)
    values = np.broadcast_to(np.asarray(fn(eigenvalues), dtype=float), eigenvalues.shape)
    return hermitian_part((spectrum.basis * values) @ adjoint(spectrum.basis))


def apply_scalar_function(M, fn, tol=DEFAULT_TOL, domain=None):
    """
    Continuous functional calculus for a Hermitian matrix.
    Eigenvalues within ``tol`` of the boundary of ``domain`` are clamped onto it;
    anything further out raises DomainError.
    """
    spectrum = herm_eig(M, tol)
    slack = tol * (1.0 + float(np.max(np.abs(spectrum.eigenvalues))))
    return spectral_function(spectrum, fn, domain=domain, slack=slack)


def psd_sqrt(M, tol=DEFAULT_TOL):
    return apply_scalar_function(M, np.sqrt, tol, domain=(0.0, np.inf))


def singular_support(sigma, rank_tol=DEFAULT_RANK_TOL):
    """Singular values that count as non-zero: sigma > rank_tol * max(1, sigma_max)."""
    cutoff = rank_tol * max(1.0, float(np.max(sigma, initial=0.0)))
    return sigma > cutoff


def contraction_factor(S, T, rank_tol=DEFAULT_RANK_TOL):
    """
    Given S*S <= T*T, returns the contraction W with S = W T that vanishes
    on the orthocomplement of the range of T.
    """
    S, T = as_matrix(S), as_matrix(T)
    if S.shape[1] != T.shape[1]:
        raise DimMismatch(f"S and T must share a domain, got {S.shape} and {T.shape}")

    slack = adjoint(T) @ T - adjoint(S) @ S + rank_tol * np.eye(T.shape[1])
    domination = is_psd(slack, rank_tol)
    if not domination.holds:
        raise DominationFailed(f"S*S <= T*T fails: least eigenvalue {domination.witness:.3e}")

    U, sigma, Vh = np.linalg.svd(T, full_matrices=False)
    keep = singular_support(sigma, rank_tol)
    t_pinv = adjoint(Vh[keep]) @ (adjoint(U[:, keep]) / sigma[keep][:, None])
    return S @ t_pinv


def polar_spectrum(D, rank_tol=DEFAULT_RANK_TOL):
    """
    N, |D| and the decomposition of D*D, all from one singular value
    decomposition of D. Small singular values keep their accuracy, which
    they would lose if D*D were formed and diagonalised first.
    """
    D = as_matrix(D)
    U, sigma, Vh = np.linalg.svd(D)
    rank = sigma.size
    keep = singular_support(sigma, rank_tol)
    N = U[:, :rank][:, keep] @ Vh[:rank][keep]
    modulus = hermitian_part((adjoint(Vh[:rank]) * sigma) @ Vh[:rank])

    eigenvalues = np.zeros(Vh.shape[0])
    eigenvalues[:rank] = sigma**2
    spectrum = SpectralDecomposition(eigenvalues=eigenvalues[::-1].copy(), basis=adjoint(Vh)[:, ::-1].copy())
    return N, modulus, spectrum


def polar_part(D, rank_tol=DEFAULT_RANK_TOL):
    """
    Returns (N, |D|) with N |D| = D and N the partial isometry whose
    initial space is the numerical range of |D|.
    """
    N, modulus, _ = polar_spectrum(D, rank_tol)
    return N, modulus
