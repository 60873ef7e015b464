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
Pure-gauge cocycles act on the n-particle sector through
D^(n) = D_1 D_2 ... D_n, where D_j is D acting on h and the j-th copy of k.
Tensor legs are ordered (h, k_1, ..., k_n).
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from app.errors import BudgetExceeded, DimMismatch, ShapeError, WrongNoiseDim
from app.numkit import DEFAULT_TOL, as_matrix, is_partial_isometry, opnorm

DEFAULT_BUDGET = 4096
DEFAULT_N_MAX = 4

NILPOTENT_NOTE = "nilpotent truncation of the left shift; a partial isometry but not a coisometry"
CYCLIC_NOTE = "cyclic truncation of the left shift; unitary on the truncated space"


@dataclass(frozen=True)
class LevelRecord:
    level: int
    residual: float
    passes: bool


@dataclass(frozen=True)
class LevelScanReport:
    n_max: int
    levels: tuple
    first_failure: int = None
    note: str = ""

    @property
    def summary(self):
        if self.first_failure is None:
            return f"passes up to n_max = {self.n_max}"
        return f"fails at level {self.first_failure}"


def _check_operator(D, dim_h, dim_k):
    D = as_matrix(D)
    size = dim_h * dim_k
    if D.shape != (size, size):
        raise DimMismatch(f"D has shape {D.shape}, expected {(size, size)} for dim_h={dim_h}, dim_k={dim_k}")
    return D


def _check_budget(levels, dim_h, dim_k, budget):
    dimension = dim_h * dim_k**levels
    if dimension > budget:
        raise BudgetExceeded(f"h (x) k^{levels} has dimension {dimension}, above the budget of {budget}")
    return dimension


def _permute_legs(operator, axes, dims):
    """Reorders the tensor legs of an operator; result leg ``a`` is source leg ``axes[a]``."""
    count = len(dims)
    tensor = operator.reshape(dims + dims)
    tensor = tensor.transpose(list(axes) + [count + a for a in axes])
    size = int(np.prod(dims))
    return tensor.reshape(size, size)


def lift_level(D, j, levels, dim_h, dim_k, budget=DEFAULT_BUDGET):
    """D acting on h and the j-th of ``levels`` copies of k, identity on the rest."""
    if not 1 <= j <= levels:
        raise ShapeError(f"level index {j} outside 1..{levels}")
    D = _check_operator(D, dim_h, dim_k)
    _check_budget(levels, dim_h, dim_k, budget)

    # kron puts the legs in the order (h, k_j, remaining k's ascending).
    lifted = np.kron(D, np.eye(dim_k ** (levels - 1)))
    axes = [0]
    for leg in range(1, levels + 1):
        if leg == j:
            axes.append(1)
        else:
            axes.append(leg + 1 if leg < j else leg)
    return _permute_legs(lifted, axes, [dim_h] + [dim_k] * levels)


def lifted_product(D, levels, dim_h, dim_k, budget=DEFAULT_BUDGET, order=None):
    """D_1 D_2 ... D_levels, or the product taken in ``order`` when given."""
    order = list(order) if order is not None else list(range(1, levels + 1))
    if sorted(order) != list(range(1, levels + 1)):
        raise ShapeError(f"order {order} is not a permutation of 1..{levels}")
    lifts = [lift_level(D, j, levels, dim_h, dim_k, budget) for j in order]
    return reduce(np.matmul, lifts)


def leg_permutation(perm, dim_h, dim_k):
    """The unitary moving the j-th copy of k to position perm[j - 1]."""
    levels = len(perm)
    if sorted(perm) != list(range(1, levels + 1)):
        raise ShapeError(f"{perm} is not a permutation of 1..{levels}")
    axes = [0] * (levels + 1)
    for source, target in enumerate(perm, start=1):
        axes[target] = source
    dims = [dim_h] + [dim_k] * levels
    size = int(np.prod(dims))
    columns = np.eye(size, dtype=complex).reshape(dims + [size])
    return columns.transpose(axes + [levels + 1]).reshape(size, size)


def _scan(operators, n_max, tol, note):
    records = []
    first_failure = None
    for level, V in enumerate(operators, start=1):
        verdict = is_partial_isometry(V, tol)
        records.append(LevelRecord(level=level, residual=verdict.witness, passes=verdict.holds))
        if not verdict.holds and first_failure is None:
            first_failure = level
    return LevelScanReport(n_max=n_max, levels=tuple(records), first_failure=first_failure, note=note)


def scan_partial_isometries(D, n_max, dim_h, dim_k, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET, note=""):
    """Partial-isometry residual of D^(n) for n = 1..n_max. Only failure is ever certified."""
    D = _check_operator(D, dim_h, dim_k)
    _check_budget(n_max, dim_h, dim_k, budget)
    operators = (lifted_product(D, level, dim_h, dim_k, budget) for level in range(1, n_max + 1))
    return _scan(operators, n_max, tol, note)


def is_power_partial_isometry(D, n_max, tol=DEFAULT_TOL, dim_k=1, note=""):
    """For one-dimensional noise D^(n) is the ordinary power D^n."""
    if dim_k != 1:
        raise WrongNoiseDim(f"power partial isometries need dim_k = 1, got {dim_k}")
    D = as_matrix(D)
    if D.shape[0] != D.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {D.shape}")
    operators = (np.linalg.matrix_power(D, level) for level in range(1, n_max + 1))
    return _scan(operators, n_max, tol, note)


def truncated_left_shift(m, cyclic=False):
    """The left shift e_(j+1) -> e_j on C^m, closed into a cycle when ``cyclic`` is set."""
    if m < 1:
        raise ShapeError(f"shift dimension must be positive, got {m}")
    shift = np.eye(m, k=1, dtype=complex)
    if cyclic:
        shift[m - 1, 0] = 1.0
    return shift


def lift_order_residual(D, perm, dim_h, dim_k, budget=DEFAULT_BUDGET):
    """||P D^(n) P* - D_perm(1) ... D_perm(n)|| for the leg permutation P."""
    levels = len(perm)
    P = leg_permutation(perm, dim_h, dim_k)
    product = lifted_product(D, levels, dim_h, dim_k, budget)
    reordered = lifted_product(D, levels, dim_h, dim_k, budget, order=perm)
    return opnorm(P @ product @ P.conj().T - reordered)


def truncation_note(D, dim_h, dim_k):
    """Names the truncated shift when D is one, so reports carry the caveat."""
    if dim_h != 1:
        return ""
    D = as_matrix(D)
    if np.array_equal(D, truncated_left_shift(dim_k)):
        return NILPOTENT_NOTE
    if np.array_equal(D, truncated_left_shift(dim_k, cyclic=True)):
        return CYCLIC_NOTE
    return ""
