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
Seeded random inputs for the verification suites and the tests.

All draws come from SplitMix64 so a seed reproduces the same stream on any
platform: state += 0x9E3779B97F4A7C15, then the usual xor-shift-multiply
finaliser; ``uniform()`` is (x >> 11) * 2^-53.
"""

import math

import numpy as np

from app.generator import Generator
from app.numkit import adjoint, opnorm, psd_sqrt
from app.polar import scalar_noise_contraction_generator
from app.semigroups import StepFunction

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed=0):
        self.state = int(seed) & MASK64

    @classmethod
    def for_trial(cls, seed, stream, trial):
        """Independent stream per (suite, trial) so suites can run in any order."""
        mixer = cls(seed)
        mixer.state = (mixer.state + GOLDEN_GAMMA * (1 + stream * 1_000_003 + trial)) & MASK64
        return cls(mixer.next_u64())

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self, low=0.0, high=1.0):
        return low + (high - low) * (self.next_u64() >> 11) * 2.0**-53

    def integer(self, low, high):
        """Uniform integer in [low, high]."""
        return low + self.next_u64() % (high - low + 1)

    def normal(self):
        # Box-Muller; 1 - uniform() lies in (0, 1].
        radius = math.sqrt(-2.0 * math.log(1.0 - self.uniform()))
        return radius * math.cos(2.0 * math.pi * self.uniform())

    def normals(self, shape):
        count = int(np.prod(shape))
        return np.array([self.normal() for _ in range(count)]).reshape(shape)

    def complex_normals(self, shape):
        return (self.normals(shape) + 1j * self.normals(shape)) / math.sqrt(2.0)


def random_hermitian(rng, n, scale=1.0):
    X = rng.complex_normals((n, n))
    return scale * 0.5 * (X + adjoint(X))


def random_unitary(rng, n):
    Q, R = np.linalg.qr(rng.complex_normals((n, n)))
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def random_contraction(rng, rows, cols, norm_max=1.0):
    X = rng.complex_normals((rows, cols))
    norm = opnorm(X)
    if norm == 0.0:
        return X
    return X * (rng.uniform(0.0, norm_max) / norm)


def random_psd_contraction(rng, m):
    """W diag(lambda) W* with lambda uniform in [0, 1]."""
    W = random_unitary(rng, m)
    eigenvalues = np.array([rng.uniform() for _ in range(m)])
    return (W * eigenvalues) @ adjoint(W)


def random_generator(rng, n, m, scale=1.0):
    """Unstructured generator, typically in no special class."""
    return Generator(
        n,
        m,
        scale * rng.complex_normals((n, n)),
        scale * rng.complex_normals((n, n * m)),
        scale * rng.complex_normals((n * m, n)),
        scale * rng.complex_normals((n * m, n * m)),
    )


def random_step_function(rng, m, horizon, segments, scale=1.0):
    weights = np.array([rng.uniform(0.2, 1.0) for _ in range(segments)])
    durations = horizon * weights / weights.sum()
    return StepFunction(tuple((dt, scale * rng.complex_normals(m)) for dt in durations))


def assemble_sectors(U, sectors):
    """
    Places one generator per eigen-index of h = C^n block-diagonally (h-major)
    and rotates the result by the unitary U on h. Every component of the
    result is U diag(.) U*, so the component family commutes with its adjoints.
    """
    n, m = len(sectors), sectors[0].dim_k
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n * m), dtype=complex)
    C = np.zeros((n * m, n), dtype=complex)
    D = np.zeros((n * m, n * m), dtype=complex)
    for a, sector in enumerate(sectors):
        block = slice(a * m, (a + 1) * m)
        A[a, a] = sector.A[0, 0]
        B[a, block] = sector.B[0]
        C[block, a] = sector.C[:, 0]
        D[block, block] = sector.D
    lifted = np.kron(U, np.eye(m))
    return Generator(
        n,
        m,
        U @ A @ adjoint(U),
        U @ B @ adjoint(lifted),
        lifted @ C @ adjoint(U),
        lifted @ D @ adjoint(lifted),
    )


def _positive_contraction_sector(rng, m):
    a = -rng.uniform(0.0, 2.0)
    d = random_psd_contraction(rng, m)
    v = random_contraction(rng, 1, m)
    beta = math.sqrt(-a) * v @ psd_sqrt(np.eye(m) - d)
    return Generator(1, m, [[a]], beta, adjoint(beta), d)


def positive_contraction_generator(rng, n, m):
    """A <= 0, 0 <= D <= I and B = C* = (-A)^(1/2) V (I - D)^(1/2) in each sector of a random frame."""
    sectors = [_positive_contraction_sector(rng, m) for _ in range(n)]
    return assemble_sectors(random_unitary(rng, n), sectors)


def commutative_contraction_generator(rng, n, m):
    """Contraction generators with commuting components, built sector by sector."""
    sectors = []
    for _ in range(n):
        sectors.append(
            scalar_noise_contraction_generator(
                random_contraction(rng, m, m),
                mu=rng.uniform(-1.0, 1.0),
                nu=rng.uniform(0.0, 1.0),
                v=rng.complex_normals(m),
                w=random_contraction(rng, m, 1).reshape(m),
            )
        )
    return assemble_sectors(random_unitary(rng, n), sectors)


def general_contraction_generator(rng, n, m, margin=0.1):
    """
    A = iH - C*C/2 - R/2 and B = R^(1/2) V (I - D*D)^(1/2) - C* D with R > 0
    and ||V||, ||D|| <= 1 - margin, so chi(F) is strictly negative.
    """
    H = random_hermitian(rng, n)
    X = rng.complex_normals((n, n))
    R = X @ adjoint(X) + margin * np.eye(n)
    C = rng.complex_normals((n * m, n))
    D = random_contraction(rng, n * m, n * m, 1.0 - margin)
    V = random_contraction(rng, n, n * m, 1.0 - margin)
    A = 1j * H - 0.5 * adjoint(C) @ C - 0.5 * R
    B = psd_sqrt(R) @ V @ psd_sqrt(np.eye(n * m) - adjoint(D) @ D) - adjoint(C) @ D
    return Generator(n, m, A, B, C, D)


def isometric_generator(rng, n, m):
    """A = iH - C*C/2, B = -C* D with D unitary: chi(F) = chi(F*) = 0."""
    H = random_hermitian(rng, n)
    C = rng.complex_normals((n * m, n))
    D = random_unitary(rng, n * m)
    return Generator(n, m, 1j * H - 0.5 * adjoint(C) @ C, -adjoint(C) @ D, C, D)
