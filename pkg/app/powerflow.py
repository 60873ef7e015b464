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
Powers of positive contraction cocycles at generator level.

The scalar functions on [0, 1] are

    f_a(t) = (a - 1 - a t + t^a) / (1 - t)^2,   f_a(1) = a (a - 1) / 2
    g_a(t) = (1 - t^a) / (1 - t),               g_a(1) = a
    h_a(t) = t^a

and the power of F = [[A, B], [B*, D - I]] is

    A_a = a A + B f_a(D) B*,  B_a = B g_a(D),  C_a = g_a(D) B*,  D_a = h_a(D).
"""

import math
from dataclasses import dataclass

import numpy as np

from app.errors import DomainError, NotPositiveContractionGenerator, SpectrumOutOfRange
from app.generator import Generator, cpos_factors, positive_contraction_verdict
from app.numkit import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    adjoint,
    contraction_factor,
    herm_eig,
    opnorm,
    psd_sqrt,
    spectral_function,
)

# Inputs this far outside [0, 1] are clamped onto it.
CLAMP_SLACK = 1e-12
# Below this distance from t = 1 the quotients are rewritten through expm1 and log1p.
NEAR_ONE = 0.5
EXP_SERIES_TERMS = 30
LOG_SERIES_TERMS = 64


@dataclass(frozen=True)
class PowerCertificate:
    W: np.ndarray
    contraction_norm: float
    residual: float


def _check_alpha(alpha):
    if not math.isfinite(alpha) or alpha <= 0:
        raise DomainError(f"exponent must be positive, got {alpha}")


def _unit_interval(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.isnan(t)) or np.any(t < -CLAMP_SLACK) or np.any(t > 1.0 + CLAMP_SLACK):
        raise DomainError("argument lies outside [0, 1]")
    return np.clip(t, 0.0, 1.0)


def _exp_remainder(x):
    """expm1(x) - x without cancellation for small |x|."""
    out = np.expm1(x) - x
    small = np.abs(x) < 0.5
    if np.any(small):
        xs = x[small]
        term = 0.5 * xs * xs
        total = term.copy()
        for k in range(3, EXP_SERIES_TERMS):
            term = term * xs / k
            total += term
        out[small] = total
    return out


def _log_remainder(s):
    """log1p(-s) + s for 0 <= s < NEAR_ONE, by its power series."""
    total = np.zeros_like(s)
    power = s.copy()
    for k in range(2, LOG_SERIES_TERMS):
        power = power * s
        total -= power / k
    return total


def _evaluate(t, far, near, at_one):
    t = _unit_interval(t)
    shape = t.shape
    t = t.reshape(-1)
    s = 1.0 - t
    out = np.empty_like(t)

    mask = s >= NEAR_ONE
    out[mask] = far(t[mask], s[mask])
    mask = (s < NEAR_ONE) & (s > 0.0)
    out[mask] = near(s[mask], np.log1p(-s[mask]))
    out[s == 0.0] = at_one

    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


def f_alpha(t, alpha):
    _check_alpha(alpha)
    return _evaluate(
        t,
        far=lambda t, s: (alpha - 1.0 - alpha * t + t**alpha) / s**2,
        near=lambda s, log_t: (_exp_remainder(alpha * log_t) + alpha * _log_remainder(s)) / s**2,
        at_one=0.5 * alpha * (alpha - 1.0),
    )


def g_alpha(t, alpha):
    _check_alpha(alpha)
    return _evaluate(
        t,
        far=lambda t, s: (1.0 - t**alpha) / s,
        near=lambda s, log_t: -np.expm1(alpha * log_t) / s,
        at_one=alpha,
    )


def h_alpha(t, alpha):
    _check_alpha(alpha)
    return _evaluate(
        t,
        far=lambda t, s: t**alpha,
        near=lambda s, log_t: np.exp(alpha * log_t),
        at_one=1.0,
    )


def _require_positive_contraction(F, tol):
    record = positive_contraction_verdict(F, tol)
    if not record.holds:
        raise NotPositiveContractionGenerator(
            f"generator is not a positive contraction generator (witness {record.witness:.3e})"
        )
    spectrum = herm_eig(F.D, tol)
    low, high = spectrum.eigenvalues[0], spectrum.eigenvalues[-1]
    if low < -tol or high > 1.0 + tol:
        raise SpectrumOutOfRange(f"spectrum of D is [{low:.6g}, {high:.6g}], not inside [0, 1]")
    return spectrum


def _power_from_spectrum(F, spectrum, alpha, tol):
    def calculus(fn):
        return spectral_function(spectrum, lambda t: fn(t, alpha), domain=(0.0, 1.0), slack=tol)

    f_d, g_d, h_d = calculus(f_alpha), calculus(g_alpha), calculus(h_alpha)
    B = F.B
    return Generator(
        F.dim_h,
        F.dim_k,
        alpha * F.A + B @ f_d @ adjoint(B),
        B @ g_d,
        g_d @ adjoint(B),
        h_d,
    )


def power_generator(F, alpha, tol=DEFAULT_TOL):
    """The generator of the alpha-th power of a positive contraction cocycle."""
    _check_alpha(alpha)
    return _power_from_spectrum(F, _require_positive_contraction(F, tol), alpha, tol)


def power_family(F, alphas, tol=DEFAULT_TOL):
    """Several powers of one generator, keyed by exponent; the class test and the spectrum of D are shared."""
    for alpha in alphas:
        _check_alpha(alpha)
    spectrum = _require_positive_contraction(F, tol)
    return {alpha: _power_from_spectrum(F, spectrum, alpha, tol) for alpha in alphas}


def power_certificate(F, alpha, rank_tol=DEFAULT_RANK_TOL):
    """
    Factorises g(D)^(1/2) V* (-A)^(1/2) = W (-a A - B f(D) B*)^(1/2) with a
    contraction W, and reports the residual of
    B g(D) = (-a A - B f(D) B*)^(1/2) W* (I - h(D))^(1/2).
    """
    _check_alpha(alpha)
    spectrum = _require_positive_contraction(F, rank_tol)
    V = cpos_factors(F, rank_tol).V

    def calculus(fn):
        return spectral_function(spectrum, fn, domain=(0.0, 1.0), slack=rank_tol)

    f_d = calculus(lambda t: f_alpha(t, alpha))
    g_d = calculus(lambda t: g_alpha(t, alpha))
    root_g = calculus(lambda t: np.sqrt(g_alpha(t, alpha)))
    root_one_minus_h = calculus(lambda t: np.sqrt(np.clip(1.0 - h_alpha(t, alpha), 0.0, None)))

    B = F.B
    S = root_g @ adjoint(V) @ psd_sqrt(-F.A, rank_tol)
    T = psd_sqrt(-alpha * F.A - B @ f_d @ adjoint(B), rank_tol)
    W = contraction_factor(S, T, rank_tol)
    residual = opnorm(B @ g_d - T @ adjoint(W) @ root_one_minus_h)
    return PowerCertificate(W=W, contraction_norm=opnorm(W), residual=residual)
