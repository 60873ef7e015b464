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

import click
from flask import current_app

from app.cli import bp
from app.cli.helpers import (
    LabCommand,
    claim_failed,
    classification_text,
    generator_text,
    get_config,
    handle_lab_errors,
    matrix_element_text,
    polar_text,
    read_input,
    render,
    scan_text,
    verify_text,
    write_report,
)
from app.gauge import scan_partial_isometries, truncation_note
from app.generator import CLASS_NAMES, classify, scale
from app.polar import polar_decompose
from app.powerflow import power_generator
from app.semigroups import ORDERS, matrix_element
from app.serialization import (
    classification_to_dict,
    gauge_input_from_dict,
    generator_from_dict,
    generator_to_dict,
    matelem_input_from_dict,
    matrix_element_to_dict,
    polar_pair_to_dict,
    scan_report_to_dict,
    verify_summary_to_dict,
)
from app.verify import run_suites

CLASS_CHOICES = CLASS_NAMES + tuple(name.replace("_", "-") for name in CLASS_NAMES if "_" in name)

input_argument = click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False))
tol_option = click.option("--tol", type=click.FloatRange(min=0.0), default=None, help="Relative tolerance.")
format_option = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default=None)
output_option = click.option("--output", type=click.Path(dir_okay=False), default=None, help="Report file.")


@bp.cli.command("classify", cls=LabCommand)
@input_argument
@tol_option
@click.option("--expect", multiple=True, type=click.Choice(CLASS_CHOICES), help="Class the generator must belong to.")
@format_option
@output_option
@handle_lab_errors
def classify_command(input_path, tol, expect, fmt, output):
    """Classify a generator into cocycle classes."""
    F = read_input(input_path, generator_from_dict)
    report = classify(F, get_config("COCYCLE_LAB_TOL", tol))
    write_report(render(report, get_config("REPORT_FORMAT", fmt), classification_to_dict, classification_text), output)

    missing = [name for name in (e.replace("-", "_") for e in expect) if not report.holds(name)]
    current_app.logger.info(f"CLASSIFY: {input_path}: {sum(r.holds for r in report.records.values())} classes hold")
    if missing:
        claim_failed(f"CLASSIFY: expected classes fail: {', '.join(missing)}")


@bp.cli.command("power", cls=LabCommand)
@input_argument
@click.option("--alpha", required=True, type=click.FloatRange(min=0.0, min_open=True), help="Positive exponent.")
@tol_option
@format_option
@output_option
@handle_lab_errors
def power_command(input_path, alpha, tol, fmt, output):
    """Generator of the alpha-th power of a positive contraction cocycle."""
    F = read_input(input_path, generator_from_dict)
    F_alpha = power_generator(F, alpha, get_config("COCYCLE_LAB_TOL", tol))
    current_app.logger.info(f"POWER: {input_path}: alpha = {alpha}")
    write_report(render(F_alpha, get_config("REPORT_FORMAT", fmt), generator_to_dict, generator_text), output)


@bp.cli.command("polar", cls=LabCommand)
@input_argument
@tol_option
@click.option("--rank-tol", type=click.FloatRange(min=0.0), default=None, help="Rank threshold for |D|.")
@format_option
@output_option
@handle_lab_errors
def polar_command(input_path, tol, rank_tol, fmt, output):
    """Polar decomposition F = E + G + E Delta G of a commutative contraction generator."""
    F = read_input(input_path, generator_from_dict)
    tol = get_config("COCYCLE_LAB_TOL", tol)
    pair = polar_decompose(F, tol, get_config("COCYCLE_LAB_RANK_TOL", rank_tol))
    write_report(render(pair, get_config("REPORT_FORMAT", fmt), polar_pair_to_dict, polar_text), output)

    threshold = tol * scale(F)
    current_app.logger.info(f"POLAR: {input_path}: largest residual {max(pair.residuals.values()):.3e}")
    if not pair.passes(threshold):
        failing = [name for name, value in pair.residuals.items() if value > threshold]
        claim_failed(f"POLAR: residuals above {threshold:.3e}: {', '.join(failing)}")


@bp.cli.command("matelem", cls=LabCommand)
@input_argument
@click.option("--order", type=click.Choice(ORDERS), default="left", show_default=True)
@format_option
@output_option
@handle_lab_errors
def matelem_command(input_path, order, fmt, output):
    """Matrix element of the cocycle between exponential vectors of step functions."""
    F, f, g = read_input(input_path, matelem_input_from_dict)
    M = matrix_element(F, f, g, order)
    current_app.logger.info(f"MATELEM: {input_path}: horizon {f.horizon:g}, order {order}")

    result = {"order": order, "horizon": f.horizon, "matrix": M}
    write_report(render(result, get_config("REPORT_FORMAT", fmt), matrix_element_to_dict, matrix_element_text), output)


@bp.cli.command("gauge", cls=LabCommand)
@input_argument
@click.option("--n-max", type=click.IntRange(min=1), default=None, help="Highest level to scan.")
@tol_option
@format_option
@output_option
@handle_lab_errors
def gauge_command(input_path, n_max, tol, fmt, output):
    """Scan D^(n) for partial-isometry failure up to n_max."""
    D, dim_h, dim_k = read_input(input_path, gauge_input_from_dict)
    report = scan_partial_isometries(
        D,
        get_config("GAUGE_N_MAX", n_max),
        dim_h,
        dim_k,
        get_config("COCYCLE_LAB_TOL", tol),
        budget=get_config("GAUGE_DIM_BUDGET"),
        note=truncation_note(D, dim_h, dim_k),
    )
    write_report(render(report, get_config("REPORT_FORMAT", fmt), scan_report_to_dict, scan_text), output)

    current_app.logger.info(f"GAUGE: {input_path}: {report.summary}")
    if report.first_failure is not None:
        claim_failed(f"GAUGE: D^(n) is not a partial isometry at level {report.first_failure}")


@bp.cli.command("verify", cls=LabCommand)
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=None)
@click.option("--trials", type=click.IntRange(min=0), default=None)
@tol_option
@format_option
@output_option
@handle_lab_errors
def verify_command(seed, trials, tol, fmt, output):
    """Run the seeded invariant suites of every module."""
    seed = get_config("VERIFY_SEED", seed)
    trials = get_config("VERIFY_TRIALS", trials)
    current_app.logger.info(f"VERIFY: running suites with seed {seed}, {trials} trials")
    summary = run_suites(seed, trials, get_config("COCYCLE_LAB_TOL", tol))
    for suite in summary.suites:
        current_app.logger.info(f"VERIFY: suite {suite.name} finished, {suite.failures} failures")

    write_report(render(summary, get_config("REPORT_FORMAT", fmt), verify_summary_to_dict, verify_text), output)
    if not summary.passed:
        claim_failed(f"VERIFY: {summary.failures} of {summary.checks} checks failed")
