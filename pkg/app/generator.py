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
Stochastic generators F = [[A, B], [C, D - I]] on h + (h (x) k).

h (x) k is ordered h-major: basis index ``a * m + i`` for h-index ``a`` and
k-index ``i``, which is numpy's ``kron(X_h, Y_k)`` convention.
"""

from dataclasses import dataclass, field

import numpy as np

from app.errors import (
    DimMismatch,
    DomainError,
    DominationFailed,
    NotHermitian,
    NotPositiveContractionGenerator,
    NotPositiveGenerator,
    ShapeError,
)
from app.numkit import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    adjoint,
    as_matrix,
    contraction_factor,
    hermitian_part,
    is_psd,
    opnorm,
    psd_sqrt,
)

CLASS_NAMES = (
    "contraction",
    "isometry",
    "coisometry",
    "unitary",
    "left_and_right",
    "adjoint_equals_time_reversed",
    "commutative_vn",
    "self_adjoint",
    "positive",
    "positive_contraction",
    "projection",
    "partial_isometry",
)

CP_FORM_SAMPLES = 10
CP_FORM_SEED = 0


@dataclass(frozen=True, eq=False)
class Generator:
    """Blocks of a generator; ``D`` is stored as D itself, not D - I."""

    dim_h: int
    dim_k: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        n, m = self.dim_h, self.dim_k
        if int(n) != n or int(m) != m or n < 1 or m < 1:
            raise ShapeError(f"dimensions must be positive integers, got dim_h={n}, dim_k={m}")
        expected = {"A": (n, n), "B": (n, n * m), "C": (n * m, n), "D": (n * m, n * m)}
        for name, shape in expected.items():
            block = as_matrix(getattr(self, name))
            if block.shape != shape:
                raise ShapeError(f"block {name} has shape {block.shape}, expected {shape}")
            object.__setattr__(self, name, block)

    @property
    def size(self):
        return self.dim_h * (1 + self.dim_k)

    @property
    def full(self):
        """The assembled matrix on h + (h (x) k)."""
        n = self.dim_h
        return np.block([[self.A, self.B], [self.C, self.D - np.eye(n * self.dim_k)]])

    @classmethod
    def from_full(cls, full, dim_h, dim_k):
        full = as_matrix(full)
        size = dim_h * (1 + dim_k)
        if full.shape != (size, size):
            raise ShapeError(f"full form has shape {full.shape}, expected {(size, size)}")
        n = dim_h
        return cls(
            dim_h,
            dim_k,
            full[:n, :n],
            full[:n, n:],
            full[n:, :n],
            full[n:, n:] + np.eye(n * dim_k),
        )

    @classmethod
    def zero(cls, dim_h, dim_k):
        n, nm = dim_h, dim_h * dim_k
        return cls(dim_h, dim_k, np.zeros((n, n)), np.zeros((n, nm)), np.zeros((nm, n)), np.eye(nm))

    def adjoint(self):
        """The generator whose full form is full(F)*."""
        return Generator(self.dim_h, self.dim_k, adjoint(self.A), adjoint(self.C), adjoint(self.B), adjoint(self.D))


@dataclass(frozen=True)
class ClassVerdict:
    holds: bool
    witness: float
    failing_pair: tuple = None
    detail: str = ""


@dataclass(frozen=True)
class ClassificationReport:
    tol: float
    records: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.records[name]

    def holds(self, name):
        return self.records[name].holds


@dataclass(frozen=True)
class CommutationVerdict:
    holds: bool
    witness: float
    failing_pair: tuple = None


@dataclass(frozen=True)
class CPForm:
    K: np.ndarray
    psi: np.ndarray
    residual: float


@dataclass(frozen=True)
class ContractionFactors:
    V: np.ndarray
    residual: float


def gauge_projection(dim_h, dim_k):
    """diag(0_n, I_nm), the projection onto the h (x) k summand."""
    n, nm = dim_h, dim_h * dim_k
    return np.diag(np.concatenate([np.zeros(n), np.ones(nm)])).astype(complex)


def scale(F, G=None):
    total = 1.0 + opnorm(F.full)
    if G is not None:
        total += opnorm(G.full)
    return total


def _check_dims(F, G):
    if (F.dim_h, F.dim_k) != (G.dim_h, G.dim_k):
        raise DimMismatch(f"generators on different spaces: {(F.dim_h, F.dim_k)} and {(G.dim_h, G.dim_k)}")


def chi(F):
    """F + F* + F* Delta F."""
    full, delta = F.full, gauge_projection(F.dim_h, F.dim_k)
    return full + adjoint(full) + adjoint(full) @ delta @ full


def pi_map(F):
    full, delta = F.full, gauge_projection(F.dim_h, F.dim_k)
    star = adjoint(full)
    return (
        full
        + star
        + star @ delta @ full
        + full @ delta @ full
        + full @ delta @ star
        + full @ delta @ star @ delta @ full
    )


def phi_map(F):
    x = chi(F)
    return x + x @ gauge_projection(F.dim_h, F.dim_k) @ x


def compose(F, G):
    """The generator F + G + F Delta G of the product cocycle."""
    _check_dims(F, G)
    full = F.full + G.full + F.full @ gauge_projection(F.dim_h, F.dim_k) @ G.full
    return Generator.from_full(full, F.dim_h, F.dim_k)


def components(F):
    """The (1+m)^2 blocks F^alpha_beta keyed by (alpha, beta); index 0 is the vacuum direction."""
    n, m = F.dim_h, F.dim_k
    table = {(0, 0): F.A.copy()}
    for j in range(1, m + 1):
        table[(0, j)] = F.B[:, j - 1 :: m].copy()
        table[(j, 0)] = F.C[j - 1 :: m, :].copy()
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            block = F.D[i - 1 :: m, j - 1 :: m].copy()
            if i == j:
                block -= np.eye(n)
            table[(i, j)] = block
    return table


def assemble(table, dim_h, dim_k):
    """Inverse of ``components``."""
    n, m = dim_h, dim_k
    B = np.zeros((n, n * m), dtype=complex)
    C = np.zeros((n * m, n), dtype=complex)
    D = np.zeros((n * m, n * m), dtype=complex)
    try:
        A = as_matrix(table[(0, 0)])
        for j in range(1, m + 1):
            B[:, j - 1 :: m] = table[(0, j)]
            C[j - 1 :: m, :] = table[(j, 0)]
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                D[i - 1 :: m, j - 1 :: m] = table[(i, j)] + (np.eye(n) if i == j else 0.0)
    except KeyError as e:
        raise ShapeError(f"component table is missing entry {e.args[0]}") from e
    except ValueError as e:
        raise ShapeError(f"component block has the wrong shape: {e}") from e
    return Generator(n, m, A, B, C, D)


def _labelled_family(F, include_adjoints):
    family = []
    for label, block in components(F).items():
        family.append((f"F{label}", block))
        if include_adjoints:
            family.append((f"F{label}*", adjoint(block)))
    return family


def _first_noncommuting(left, right, threshold):
    """Spectral norms of every commutator at once; the first failing pair in row order is reported."""
    X = np.array([block for _, block in left])
    Y = np.array([block for _, block in right])
    commutators = np.einsum("aij,bjk->abik", X, Y) - np.einsum("bij,ajk->abik", Y, X)
    residuals = np.linalg.norm(commutators, ord=2, axis=(-2, -1))
    failing = np.argwhere(residuals > threshold)
    if failing.size:
        a, b = failing[0]
        return CommutationVerdict(holds=False, witness=float(residuals[a, b]), failing_pair=(left[a][0], right[b][0]))
    return CommutationVerdict(holds=True, witness=float(residuals.max()))


def commutes_componentwise(F, include_adjoints=False, tol=DEFAULT_TOL):
    """
    Pairwise commutation of the component blocks (and their adjoints when
    ``include_adjoints`` is set). Reports the first pair that fails.
    """
    if F.dim_h == 1:
        return CommutationVerdict(holds=True, witness=0.0)
    family = _labelled_family(F, include_adjoints)
    return _first_noncommuting(family, family, tol * scale(F))


def commutes_with(F, G, tol=DEFAULT_TOL):
    """Every component of F and its adjoint commutes with every component of G."""
    _check_dims(F, G)
    if F.dim_h == 1:
        return CommutationVerdict(holds=True, witness=0.0)
    return _first_noncommuting(_labelled_family(F, True), _labelled_family(G, False), tol * scale(F, G))


def _norm_verdict(M, threshold):
    residual = opnorm(M)
    return ClassVerdict(holds=residual <= threshold, witness=residual)


def _positivity_records(F, tol, vn, contraction):
    """The self-adjoint, positive and positive-contraction records, given the commutation and contraction tests."""
    threshold = tol * scale(F)
    full = F.full
    delta = gauge_projection(F.dim_h, F.dim_k)

    time_reversal = _norm_verdict(full - adjoint(full), threshold)
    self_adjoint = ClassVerdict(
        holds=time_reversal.holds and vn.holds, witness=time_reversal.witness, failing_pair=vn.failing_pair
    )
    gauge_positivity = is_psd(hermitian_part(delta @ full @ delta + delta), tol)
    positive = ClassVerdict(
        holds=self_adjoint.holds and gauge_positivity.holds,
        witness=gauge_positivity.witness,
        failing_pair=vn.failing_pair,
        detail="witness: least eigenvalue of Delta F Delta + Delta",
    )
    nonpositive = is_psd(-hermitian_part(full), tol)
    positive_contraction = ClassVerdict(
        holds=positive.holds and nonpositive.holds and contraction.holds,
        witness=-nonpositive.witness,
        failing_pair=vn.failing_pair,
        detail="witness: greatest eigenvalue of F",
    )
    return {
        "adjoint_equals_time_reversed": time_reversal,
        "self_adjoint": self_adjoint,
        "positive": positive,
        "positive_contraction": positive_contraction,
    }


def positive_contraction_verdict(F, tol=DEFAULT_TOL):
    """The positive-contraction record of ``classify`` without evaluating the other classes."""
    contraction = is_psd(-chi(F), tol)
    vn = commutes_componentwise(F, True, tol)
    return _positivity_records(F, tol, vn, contraction)["positive_contraction"]


def classify(F, tol=DEFAULT_TOL):
    """Evaluates every cocycle class; no class short-circuits another."""
    threshold = tol * scale(F)
    full = F.full
    delta = gauge_projection(F.dim_h, F.dim_k)
    records = {}

    chi_f = chi(F)
    contraction = is_psd(-chi_f, tol)
    records["contraction"] = ClassVerdict(holds=contraction.holds, witness=-contraction.witness)
    records["isometry"] = _norm_verdict(chi_f, threshold)
    records["coisometry"] = _norm_verdict(chi(F.adjoint()), threshold)
    records["unitary"] = ClassVerdict(
        holds=records["isometry"].holds and records["coisometry"].holds,
        witness=max(records["isometry"].witness, records["coisometry"].witness),
    )

    left_and_right = commutes_componentwise(F, False, tol)
    records["left_and_right"] = ClassVerdict(
        holds=left_and_right.holds, witness=left_and_right.witness, failing_pair=left_and_right.failing_pair
    )
    vn = commutes_componentwise(F, True, tol)
    records["commutative_vn"] = ClassVerdict(holds=vn.holds, witness=vn.witness, failing_pair=vn.failing_pair)
    records.update(_positivity_records(F, tol, vn, contraction))

    projection = _norm_verdict(full + adjoint(full) @ delta @ full, threshold)
    records["projection"] = ClassVerdict(
        holds=vn.holds and projection.holds and records["positive_contraction"].holds,
        witness=projection.witness,
        failing_pair=vn.failing_pair,
    )
    partial = _norm_verdict(pi_map(F), threshold)
    records["partial_isometry"] = ClassVerdict(
        holds=vn.holds and partial.holds, witness=partial.witness, failing_pair=vn.failing_pair
    )

    return ClassificationReport(tol=tol, records={name: records[name] for name in CLASS_NAMES})


def _component_algebra_samples(F, count, seed):
    """Random polynomials in a random Hermitian element of the component algebra, normalised."""
    rng = np.random.default_rng(seed)
    n = F.dim_h
    family = list(components(F).values())
    hermitian = np.zeros((n, n), dtype=complex)
    for block in family:
        weight = rng.normal() + 1j * rng.normal()
        hermitian += weight * block + np.conj(weight) * adjoint(block)
    hermitian /= max(opnorm(hermitian), 1.0)

    samples = []
    for _ in range(count):
        coefficients = rng.normal(size=4)
        a = sum(c * np.linalg.matrix_power(hermitian, k) for k, c in enumerate(coefficients))
        samples.append(a / max(opnorm(a), 1e-12))
    return samples


def cp_form(F, tol=DEFAULT_TOL, samples=CP_FORM_SAMPLES, seed=CP_FORM_SEED):
    """
    K = [A/2, B] and the psi datum D of a positive generator, together with the
    largest residual of F (a (x) I) = psi(a) + E_0 a K + K* a E^0 - a (x) P over
    sampled a from the component algebra, where psi(a) = D^(1/2) (a (x) I) D^(1/2).
    """
    if not classify(F, tol).holds("positive"):
        raise NotPositiveGenerator("generator fails the positive-cocycle criterion")

    n, m = F.dim_h, F.dim_k
    K = np.hstack([0.5 * F.A, F.B])
    root_d = psd_sqrt(F.D, tol)
    residual = 0.0
    for a in _component_algebra_samples(F, samples, seed):
        lifted = np.kron(a, np.eye(m))
        amplified = np.block([[a, np.zeros((n, n * m))], [np.zeros((n * m, n)), lifted]])
        psi = root_d @ lifted @ root_d
        expected = np.block(
            [
                [0.5 * (a @ F.A + adjoint(F.A) @ a), a @ F.B],
                [adjoint(F.B) @ a, psi - lifted],
            ]
        )
        residual = max(residual, opnorm(F.full @ amplified - expected))
    return CPForm(K=K, psi=F.D.copy(), residual=residual)


def cpos_factors(F, rank_tol=DEFAULT_RANK_TOL):
    """
    The contraction V with B = (-A)^(1/2) V (I - D)^(1/2) for a generator with
    A <= 0 and 0 <= D <= I, built by two contraction factorisations.
    """
    nm = F.dim_h * F.dim_k
    try:
        root_a = psd_sqrt(-F.A, rank_tol)
        root_d = psd_sqrt(np.eye(nm) - F.D, rank_tol)
        psd_sqrt(F.D, rank_tol)
        first = contraction_factor(adjoint(F.B), root_a, rank_tol)
        V = contraction_factor(adjoint(first), root_d, rank_tol)
    except (DomainError, NotHermitian, DominationFailed) as e:
        raise NotPositiveContractionGenerator(f"no contraction factorisation of B: {e}") from e
    residual = opnorm(F.B - root_a @ V @ root_d)
    return ContractionFactors(V=V, residual=residual)
