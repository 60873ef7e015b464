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
from dataclasses import dataclass, field

import numpy as np

from app.errors import NotPositiveContractionGenerator, SpectrumOutOfRange
from app.gauge import is_power_partial_isometry, lift_order_residual, scan_partial_isometries
from app.generator import (
    Generator,
    chi,
    classify,
    compose,
    gauge_projection,
    phi_map,
    pi_map,
    positive_contraction_verdict,
    scale,
)
from app.numkit import (
    DEFAULT_RANK_TOL,
    adjoint,
    apply_scalar_function,
    contraction_factor,
    herm_eig,
    is_partial_isometry,
    mat_exp,
    opnorm,
    polar_part,
)
from app.polar import polar_decompose
from app.powerflow import f_alpha, g_alpha, h_alpha, power_family, power_generator
from app.sampling import (
    SplitMix64,
    commutative_contraction_generator,
    general_contraction_generator,
    isometric_generator,
    positive_contraction_generator,
    random_contraction,
    random_generator,
    random_hermitian,
    random_psd_contraction,
    random_step_function,
    random_unitary,
)
from app.semigroups import (
    StepFunction,
    adjoint_symmetry_residual,
    matrix_element,
    perturbation_bound,
    recover_generator,
    semigroup_at,
    step_distance,
    z_table,
)

SUITE_NAMES = ("numkit", "generator", "semigroups", "powerflow", "polar", "gauge")
MAX_MESSAGES = 20

POWER_PAIRS = ((0.5, 0.5), (0.5, 2.0), (1.5, math.e))
GRID_ALPHAS = (0.5, 1.0, 1.5, 2.0, math.e, 10.0)


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    messages: list = field(default_factory=list)

    @property
    def passed(self):
        return self.failures == 0

    def check(self, condition, message):
        self.checks += 1
        if not condition:
            self.failures += 1
            if len(self.messages) < MAX_MESSAGES:
                self.messages.append(message)


@dataclass(frozen=True)
class VerifySummary:
    seed: int
    trials: int
    tol: float
    suites: tuple

    @property
    def checks(self):
        return sum(suite.checks for suite in self.suites)

    @property
    def failures(self):
        return sum(suite.failures for suite in self.suites)

    @property
    def passed(self):
        return self.failures == 0


def _trials(seed, stream, trials):
    for trial in range(trials):
        yield trial, SplitMix64.for_trial(seed, stream, trial)


def _close(x, y, rtol, reference=None):
    reference = opnorm(x) if reference is None else reference
    return opnorm(x - y) <= rtol * (1.0 + reference)


def numkit_suite(seed, trials, tol):
    suite = SuiteResult("numkit")
    for trial, rng in _trials(seed, 0, trials):
        n = rng.integer(1, 5)
        M = random_hermitian(rng, n, scale=rng.uniform(0.1, 10.0))
        spectrum = herm_eig(M, tol)
        suite.check(_close(spectrum.reconstruct(), M, 1e-10, opnorm(M)), f"trial {trial}: eigen reconstruction")
        suite.check(
            opnorm(adjoint(spectrum.basis) @ spectrum.basis - np.eye(n)) <= 1e-10, f"trial {trial}: basis not unitary"
        )

        H = random_hermitian(rng, 4)
        H *= rng.uniform(0.1, 50.0) / opnorm(H)
        oracle_spectrum = herm_eig(H, tol)
        oracle = (oracle_spectrum.basis * np.exp(oracle_spectrum.eigenvalues)) @ adjoint(oracle_spectrum.basis)
        suite.check(
            opnorm(mat_exp(H) - oracle) <= 1e-10 * opnorm(oracle), f"trial {trial}: exponential disagrees with oracle"
        )

        K = random_hermitian(rng, n)
        K /= max(opnorm(K), 1e-12)
        first, second = 0.7j * K, 0.3 * K @ K
        suite.check(
            _close(mat_exp(first + second), mat_exp(first) @ mat_exp(second), 1e-9),
            f"trial {trial}: exponential of commuting sum",
        )

        P = random_psd_contraction(rng, n)
        alpha, beta = rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0)
        unit = (0.0, 1.0)
        inner = apply_scalar_function(P, lambda t: h_alpha(t, beta), tol, domain=unit)
        nested = apply_scalar_function(inner, lambda t: h_alpha(t, alpha), tol, domain=unit)
        direct = apply_scalar_function(P, lambda t: h_alpha(t, alpha * beta), tol, domain=unit)
        suite.check(_close(nested, direct, 1e-9), f"trial {trial}: power composition in functional calculus")

        D = random_contraction(rng, n, n)
        if n > 1 and rng.uniform() < 0.5:
            D[:, 0] = 0.0
        N, modulus = polar_part(D)
        suite.check(is_partial_isometry(N, 1e-9).holds, f"trial {trial}: polar part is not a partial isometry")
        suite.check(
            opnorm(N @ modulus - D) <= 10 * DEFAULT_RANK_TOL * (1.0 + opnorm(D)), f"trial {trial}: N |D| != D"
        )

        T = rng.complex_normals((n, n))
        if n > 1 and rng.uniform() < 0.5:
            T[:, -1] = T[:, 0]
        S = random_contraction(rng, 2, n) @ T
        W = contraction_factor(S, T)
        suite.check(opnorm(W) <= 1.0 + 10 * DEFAULT_RANK_TOL, f"trial {trial}: contraction factor norm above 1")
        suite.check(
            opnorm(S - W @ T) <= 10 * DEFAULT_RANK_TOL * (1.0 + opnorm(S)), f"trial {trial}: S != W T"
        )
    return suite


def _largest_eigenvalue(M):
    return float(herm_eig(M).eigenvalues[-1])


def _generator_sample(rng, kind, n, m):
    if kind == 0:
        return random_generator(rng, n, m, scale=0.5)
    if kind == 1:
        return general_contraction_generator(rng, n, m)
    if kind == 2:
        return isometric_generator(rng, n, m)
    return positive_contraction_generator(rng, n, m)


def generator_suite(seed, trials, tol):
    suite = SuiteResult("generator")
    for trial, rng in _trials(seed, 1, trials):
        n, m = rng.integer(1, 3), rng.integer(1, 2)
        F = _generator_sample(rng, trial % 4, n, m)
        star = F.adjoint()
        s = scale(F)
        size = F.size
        delta = gauge_projection(n, m)
        identity = np.eye(size)

        identity_residual = opnorm(
            phi_map(F) - (identity + adjoint(F.full) @ delta) @ chi(star) @ (identity + delta @ F.full)
        )
        suite.check(identity_residual <= 1e-12 * s**4, f"trial {trial}: phi identity residual {identity_residual:.3e}")

        tops = [_largest_eigenvalue(M) for M in (chi(F), chi(star), phi_map(F), phi_map(star))]
        if all(abs(top) >= 1e-8 for top in tops):
            verdicts = {top <= 0 for top in tops}
            suite.check(len(verdicts) == 1, f"trial {trial}: contraction verdicts disagree {tops}")

        threshold = tol * s**4
        norms = [opnorm(pi_map(F)), opnorm(pi_map(star)), opnorm(phi_map(F))]
        if all(value <= threshold or value >= 1e-6 for value in norms):
            verdicts = {value <= threshold for value in norms}
            suite.check(len(verdicts) == 1, f"trial {trial}: partial-isometry verdicts disagree {norms}")

        G = _generator_sample(rng, (trial + 1) % 4, n, m)
        H = _generator_sample(rng, (trial + 2) % 4, n, m)
        left = compose(compose(F, G), H)
        right = compose(F, compose(G, H))
        suite.check(
            opnorm(left.full - right.full) <= 1e-12 * s * scale(G) * scale(H), f"trial {trial}: compose associativity"
        )
        zero = Generator.zero(F.dim_h, F.dim_k)
        suite.check(
            max(opnorm(compose(F, zero).full - F.full), opnorm(compose(zero, F).full - F.full)) <= 1e-14 * s,
            f"trial {trial}: zero is not a unit for compose",
        )

        U1 = isometric_generator(rng, F.dim_h, F.dim_k)
        U2 = isometric_generator(rng, F.dim_h, F.dim_k)
        suite.check(
            opnorm(chi(compose(U1, U2))) <= 1e-9 * scale(U1) * scale(U2), f"trial {trial}: isometries not closed"
        )

        report = classify(F, tol)
        implications = [
            ("unitary", report.holds("unitary") == (report.holds("isometry") and report.holds("coisometry"))),
            ("projection", not report.holds("projection") or report.holds("positive_contraction")),
            ("positive_contraction", not report.holds("positive_contraction") or report.holds("contraction")),
            ("positive", not report.holds("positive") or report.holds("self_adjoint")),
        ]
        for name, holds in implications:
            suite.check(holds, f"trial {trial}: implication broken at {name}")
    return suite


def semigroups_suite(seed, trials, tol):
    suite = SuiteResult("semigroups")
    for trial, rng in _trials(seed, 2, trials):
        n, m = rng.integer(1, 3), rng.integer(1, 2)
        F = random_generator(rng, n, m, scale=0.5)
        rebuilt = recover_generator(z_table(F), n, m)
        suite.check(opnorm(rebuilt.full - F.full) <= 1e-12 * scale(F), f"trial {trial}: generator table roundtrip")

        c, d = 0.5 * rng.complex_normals(m), 0.5 * rng.complex_normals(m)
        s, t = rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)
        joint = semigroup_at(F, c, d, s + t)
        suite.check(
            _close(joint, semigroup_at(F, c, d, s) @ semigroup_at(F, c, d, t), 1e-10),
            f"trial {trial}: semigroup law",
        )

        f = random_step_function(rng, m, 1.0, 3, scale=0.5)
        g = random_step_function(rng, m, 1.0, 2, scale=0.5)
        element = matrix_element(F, f, g)
        first_dt, first_value = f.segments[0]
        refined = StepFunction(((0.5 * first_dt, first_value), (0.5 * first_dt, first_value)) + f.segments[1:])
        suite.check(_close(matrix_element(F, refined, g), element, 1e-10), f"trial {trial}: refinement changed result")

        suite.check(
            _close(
                matrix_element(F.adjoint(), f, g, "right"),
                adjoint(matrix_element(F, g, f, "left")),
                1e-10,
            ),
            f"trial {trial}: adjoint cocycle identity",
        )

        symmetric = Generator.from_full(0.5 * (F.full + adjoint(F.full)), n, m)
        suite.check(
            adjoint_symmetry_residual(symmetric, c, d, t) <= 1e-10 * (1.0 + opnorm(semigroup_at(symmetric, c, d, t))),
            f"trial {trial}: self-adjoint generator breaks adjoint symmetry",
        )
        suite.check(
            max(adjoint_symmetry_residual(F, c, d, 1.0), adjoint_symmetry_residual(F, d, c, 1.0)) > 1e-6,
            f"trial {trial}: adjoint symmetry holds for F != F*",
        )

        commuting = positive_contraction_generator(rng, n, m)
        suite.check(
            _close(matrix_element(commuting, f, g, "left"), matrix_element(commuting, f, g, "right"), 1e-10),
            f"trial {trial}: orders differ for commuting components",
        )

        nearby = StepFunction(tuple((dt, value + 1e-3 * rng.complex_normals(m)) for dt, value in f.segments))
        bound = perturbation_bound(F, f, nearby, g)
        change = opnorm(matrix_element(F, f, g) - matrix_element(F, nearby, g))
        suite.check(change <= bound * step_distance(f, nearby) + 1e-12, f"trial {trial}: Lipschitz bound exceeded")
    return suite


def _scalar_identity_checks(suite, tol):
    grid = np.linspace(0.0, 1.0, 1001)
    grid = np.concatenate([grid, 1.0 - np.array([1e-6, 1e-8, 1e-10])])

    def agree(x, y):
        return bool(np.all(np.abs(np.asarray(x) - np.asarray(y)) <= 1e-12 * (1.0 + np.abs(y))))

    for alpha in GRID_ALPHAS:
        f, g, h = f_alpha(grid, alpha), g_alpha(grid, alpha), h_alpha(grid, alpha)
        suite.check(agree(g, alpha - (1.0 - grid) * f), f"alpha {alpha}: g = alpha - (1 - t) f")
        for beta in GRID_ALPHAS:
            suite.check(
                agree(f + f_alpha(grid, beta) + g * g_alpha(grid, beta), f_alpha(grid, alpha + beta)),
                f"alpha {alpha}, beta {beta}: additive f",
            )
            suite.check(
                agree(g_alpha(grid, beta) + g * h_alpha(grid, beta), g_alpha(grid, alpha + beta)),
                f"alpha {alpha}, beta {beta}: additive g",
            )
            suite.check(agree(h * h_alpha(grid, beta), h_alpha(grid, alpha + beta)), "additive h")
            suite.check(
                agree(beta * f + g * g * f_alpha(h, beta), f_alpha(grid, alpha * beta)),
                f"alpha {alpha}, beta {beta}: composed f",
            )
            suite.check(
                agree(g * g_alpha(h, beta), g_alpha(grid, alpha * beta)), f"alpha {alpha}, beta {beta}: composed g"
            )
            if 1.0 <= alpha < beta:
                monotone = (
                    np.all(f <= f_alpha(grid, beta) + 1e-12 * (1 + np.abs(f)))
                    and np.all(g <= g_alpha(grid, beta) + 1e-12 * (1 + np.abs(g)))
                    and np.all(h >= h_alpha(grid, beta) - 1e-12)
                )
                suite.check(bool(monotone), f"alpha {alpha}, beta {beta}: monotonicity")

    f_half, g_half = f_alpha(grid, 0.5), g_alpha(grid, 0.5)
    suite.check(agree(2.0 * f_half + g_half**2, 0.0 * grid), "2 f_1/2 + g_1/2^2 = 0")
    suite.check(agree(np.sqrt(grid) * g_half, 1.0 - g_half), "sqrt(t) g_1/2 = 1 - g_1/2")


def powerflow_suite(seed, trials, tol):
    suite = SuiteResult("powerflow")
    if trials > 0:
        _scalar_identity_checks(suite, tol)
    exponents = sorted({x for alpha, beta in POWER_PAIRS for x in (alpha, beta, alpha + beta, alpha * beta)})
    for trial, rng in _trials(seed, 3, trials):
        F = positive_contraction_generator(rng, rng.integer(1, 3), rng.integer(1, 2))
        powers = power_family(F, exponents, tol)
        threshold = 1e-9 * scale(F)
        for alpha in sorted({alpha for alpha, _ in POWER_PAIRS}):
            betas = [beta for a, beta in POWER_PAIRS if a == alpha]
            # power_family raises unless F_alpha is again a positive contraction generator.
            try:
                nested = power_family(powers[alpha], betas, tol)
            except (NotPositiveContractionGenerator, SpectrumOutOfRange) as e:
                suite.check(False, f"trial {trial}: F_{alpha} not closed: {e}")
                continue
            suite.check(True, f"trial {trial}: F_{alpha} not closed")
            for beta in betas:
                suite.check(
                    opnorm(compose(powers[alpha], powers[beta]).full - powers[alpha + beta].full) <= threshold,
                    f"trial {trial}: F_{alpha} + F_{beta} composition",
                )
                suite.check(
                    opnorm(nested[beta].full - powers[alpha * beta].full) <= threshold,
                    f"trial {trial}: (F_{alpha})_{beta}",
                )
    return suite


def polar_suite(seed, trials, tol):
    suite = SuiteResult("polar")
    for trial, rng in _trials(seed, 4, trials):
        F = commutative_contraction_generator(rng, rng.integer(1, 3), rng.integer(1, 3))
        pair = polar_decompose(F, tol)
        threshold = 1e-9 * scale(F)
        for name, value in pair.residuals.items():
            suite.check(value <= threshold, f"trial {trial}: residual {name} = {value:.3e}")
        suite.check(positive_contraction_verdict(pair.G, tol).holds, f"trial {trial}: G not a positive contraction")
        chi_generator = Generator.from_full(chi(F), F.dim_h, F.dim_k)
        suite.check(
            opnorm(pair.G.full - power_generator(chi_generator, 0.5, tol).full) <= threshold,
            f"trial {trial}: G differs from chi(F) to the power 1/2",
        )
    return suite


def _random_permutation(rng, levels):
    perm = list(range(1, levels + 1))
    for i in range(levels - 1, 0, -1):
        j = rng.integer(0, i)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def gauge_suite(seed, trials, tol):
    suite = SuiteResult("gauge")
    for trial, rng in _trials(seed, 5, trials):
        n = rng.integer(1, 3)
        D = rng.complex_normals((n, n))
        tensor = scan_partial_isometries(D, 3, n, 1, tol)
        power = is_power_partial_isometry(D, 3, tol)
        suite.check(
            all(abs(a.residual - b.residual) <= 1e-12 * (1 + a.residual) for a, b in zip(tensor.levels, power.levels)),
            f"trial {trial}: tensor scan and power scan disagree",
        )

        m = rng.integer(1, 2)
        U = random_unitary(rng, n * m)
        report = scan_partial_isometries(U, 3, n, m, tol)
        suite.check(report.first_failure is None, f"trial {trial}: unitary D fails level {report.first_failure}")

        perm = _random_permutation(rng, 3)
        D2 = rng.complex_normals((2 * m, 2 * m))
        suite.check(
            lift_order_residual(D2, perm, 2, m) <= 1e-12 * (1.0 + opnorm(D2)) ** 3,
            f"trial {trial}: leg permutation {perm} does not reorder the lifts",
        )
    return suite


SUITES = {
    "numkit": numkit_suite,
    "generator": generator_suite,
    "semigroups": semigroups_suite,
    "powerflow": powerflow_suite,
    "polar": polar_suite,
    "gauge": gauge_suite,
}


def run_suites(seed, trials, tol, names=SUITE_NAMES):
    """Runs the named suites in the fixed suite order."""
    results = tuple(SUITES[name](seed, trials, tol) for name in SUITE_NAMES if name in names)
    return VerifySummary(seed=seed, trials=trials, tol=tol, suites=results)
