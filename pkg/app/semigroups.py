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
from functools import reduce

import numpy as np

from app.errors import DimMismatch, DomainError, HorizonMismatch, MissingEntry, ShapeError
from app.generator import assemble
from app.numkit import adjoint, mat_exp, opnorm

ORDERS = ("left", "right")
HORIZON_RTOL = 1e-12
SEGMENT_RTOL = 1e-15


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant map [0, t) -> k as (duration, value) segments."""

    segments: tuple

    def __post_init__(self):
        if not self.segments:
            raise ShapeError("a step function needs at least one segment")
        cleaned = []
        for dt, value in self.segments:
            dt = float(dt)
            if not math.isfinite(dt) or dt <= 0.0:
                raise ShapeError(f"segment durations must be positive, got {dt}")
            vector = np.array(value, dtype=complex).reshape(-1)
            if not np.all(np.isfinite(vector)):
                raise ShapeError("step function value has non-finite entries")
            cleaned.append((dt, vector))
        if len({vector.shape[0] for _, vector in cleaned}) != 1:
            raise ShapeError("all step function values must have the same length")
        object.__setattr__(self, "segments", tuple(cleaned))

    @classmethod
    def constant(cls, value, horizon):
        return cls(((horizon, value),))

    @property
    def dim(self):
        return self.segments[0][1].shape[0]

    @property
    def durations(self):
        return np.array([dt for dt, _ in self.segments])

    @property
    def horizon(self):
        return float(np.sum(self.durations))

    def value_at(self, s):
        index = int(np.searchsorted(np.cumsum(self.durations), s, side="right"))
        return self.segments[min(index, len(self.segments) - 1)][1]


def _vector(v, m):
    v = np.array(v, dtype=complex).reshape(-1)
    if v.shape[0] != m:
        raise DimMismatch(f"expected a vector of length {m}, got {v.shape[0]}")
    return v


def _noise_column(n, v):
    """I (x) v as an (nm) x n matrix."""
    return np.kron(np.eye(n), v[:, None])


def z_generator(F, c, d):
    """Z^c_d = A + B (I(x)d) + (I(x)c)* C + (I(x)c)* D (I(x)d)."""
    n, m = F.dim_h, F.dim_k
    right = _noise_column(n, _vector(d, m))
    left = adjoint(_noise_column(n, _vector(c, m)))
    return F.A + F.B @ right + left @ F.C + left @ F.D @ right


def _basis_vector(alpha, m):
    e = np.zeros(m, dtype=complex)
    if alpha:
        e[alpha - 1] = 1.0
    return e


def z_table(F):
    """Z over the basis e_0..e_m of C + k, where e_0 stands for the zero vector of k."""
    m = F.dim_k
    return {
        (alpha, beta): z_generator(F, _basis_vector(alpha, m), _basis_vector(beta, m))
        for alpha in range(m + 1)
        for beta in range(m + 1)
    }


def recover_generator(table, dim_h, dim_k):
    """Rebuilds F from its table of semigroup generators over the basis of C + k."""
    n, m = dim_h, dim_k
    missing = [(a, b) for a in range(m + 1) for b in range(m + 1) if (a, b) not in table]
    if missing:
        raise MissingEntry(f"semigroup generator table lacks entries {missing}")

    z = {key: np.array(value, dtype=complex) for key, value in table.items()}
    base = z[(0, 0)]
    blocks = {(0, 0): base}
    for j in range(1, m + 1):
        blocks[(j, 0)] = z[(j, 0)] - base
        blocks[(0, j)] = z[(0, j)] - base
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            block = z[(i, j)] - z[(i, 0)] - z[(0, j)] + base
            if i == j:
                block = block - np.eye(n)
            blocks[(i, j)] = block
    return assemble(blocks, n, m)


def semigroup_at(F, c, d, t):
    if t < 0:
        raise DomainError(f"semigroup time must be non-negative, got {t}")
    return mat_exp(t * z_generator(F, c, d))


def markov_semigroup(F, t):
    """Q^{0,0}_t = exp(t A)."""
    zero = np.zeros(F.dim_k)
    return semigroup_at(F, zero, zero, t)


def adjoint_symmetry_residual(F, c, d, t):
    """||(Q^{c,d}_t)* - Q^{d,c}_t||; vanishes for all c, d, t exactly when F = F*."""
    return opnorm(adjoint(semigroup_at(F, c, d, t)) - semigroup_at(F, d, c, t))


def common_refinement(*functions):
    """
    Splits the functions onto the union of their breakpoints. Returns
    (duration, values) pairs, one value per function; slivers shorter than
    SEGMENT_RTOL of the horizon are dropped.
    """
    horizons = [f.horizon for f in functions]
    horizon = max(horizons)
    if max(horizons) - min(horizons) > HORIZON_RTOL * max(1.0, horizon):
        raise HorizonMismatch(f"step functions end at different times: {horizons}")

    cuts = [np.cumsum(f.durations)[:-1] for f in functions]
    points = np.unique(np.concatenate([[0.0, horizon], *cuts]))
    points = points[points <= horizon]
    pieces = []
    for start, stop in zip(points[:-1], points[1:]):
        dt = float(stop - start)
        if dt <= SEGMENT_RTOL * horizon:
            continue
        middle = 0.5 * (start + stop)
        pieces.append((dt, tuple(f.value_at(middle) for f in functions)))
    return pieces


def matrix_element(F, f, g, order="left"):
    """
    <e(f), X_t e(g)> restricted to h, as the ordered product of Q^{f(s), g(s)}
    factors over the common refinement. ``left`` puts the earliest segment
    leftmost; ``right`` reverses the factors.
    """
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")
    for step in (f, g):
        if step.dim != F.dim_k:
            raise DimMismatch(f"step function values have length {step.dim}, expected {F.dim_k}")

    factors = [semigroup_at(F, c, d, dt) for dt, (c, d) in common_refinement(f, g)]
    if order == "right":
        factors.reverse()
    return reduce(np.matmul, factors, np.eye(F.dim_h, dtype=complex))


def step_distance(f, f_other):
    """Supremum distance between two step functions of the same horizon."""
    return max(float(np.linalg.norm(a - b)) for _, (a, b) in common_refinement(f, f_other))


def perturbation_bound(F, f, f_other, g):
    """
    L with ||M(f, g) - M(f', g)|| <= L ||f - f'||_sup for the matrix elements M
    in either order: t (||C|| + ||D|| max|g|) exp(t max||Z||).
    """
    pieces = common_refinement(f, f_other, g)
    horizon = sum(dt for dt, _ in pieces)
    largest_g = max(float(np.linalg.norm(values[2])) for _, values in pieces)
    largest_z = max(
        max(opnorm(z_generator(F, c, d)), opnorm(z_generator(F, c_other, d))) for _, (c, c_other, d) in pieces
    )
    return horizon * (opnorm(F.C) + opnorm(F.D) * largest_g) * math.exp(horizon * largest_z)
