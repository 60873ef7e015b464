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

from functools import wraps

import click
import numpy as np
from flask import current_app

from app.errors import PRECONDITION_ERRORS, LabError
from app.serialization import dumps, loads

CLAIM_FAILED = 2


class LabCommand(click.Command):
    """Usage errors exit with status 1; status 2 is reserved for failed claims."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = 1
            raise


def get_config(key, value=None):
    """Helper to fall back on the app config when a flag was not given."""
    return current_app.config.get(key) if value is None else value


def handle_lab_errors(f):
    """
    Turns errors from the numeric modules into one-line diagnostics: a failed
    precondition of the requested transform exits 2, anything else exits 1.
    """

    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except PRECONDITION_ERRORS as e:
            click.echo(f"Error: {type(e).__name__}: {e}", err=True)
            raise click.exceptions.Exit(CLAIM_FAILED) from e
        except LabError as e:
            raise click.ClickException(f"{type(e).__name__}: {e}") from e

    return decorated_function


def claim_failed(message):
    current_app.logger.warning(message)
    raise click.exceptions.Exit(CLAIM_FAILED)


def read_input(path, decoder):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise click.ClickException(f"cannot read {path}: {e.strerror}") from e
    return decoder(loads(text))


def write_report(text, output=None):
    if output is None:
        click.echo(text, nl=False)
        return
    try:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as e:
        raise click.ClickException(f"cannot write {output}: {e.strerror}") from e


def render(obj, fmt, to_dict, to_text):
    if fmt == "json":
        return dumps(to_dict(obj))
    return to_text(obj)


def format_complex(z):
    z = complex(z)
    return f"{z.real:.10g}{z.imag:+.10g}j"


def format_matrix(name, M):
    lines = [f"{name} ="]
    for row in np.asarray(M):
        lines.append("  [" + ", ".join(format_complex(z) for z in row) + "]")
    return lines


def generator_text(F, title="generator"):
    lines = [f"{title}: dim_h = {F.dim_h}, dim_k = {F.dim_k}"]
    for name in "ABCD":
        lines.extend(format_matrix(name, getattr(F, name)))
    return "\n".join(lines) + "\n"


def classification_text(report):
    lines = [f"{'class':<30} {'holds':<6} witness"]
    for name, record in report.records.items():
        line = f"{name:<30} {'yes' if record.holds else 'no':<6} {record.witness:.6e}"
        if record.failing_pair:
            line += f"  (first failing pair: {record.failing_pair[0]}, {record.failing_pair[1]})"
        lines.append(line)
    return "\n".join(lines) + "\n"


def polar_text(pair):
    lines = [generator_text(pair.E, "partial isometry part E").rstrip("\n")]
    lines.append(generator_text(pair.G, "positive part G").rstrip("\n"))
    lines.append("residuals:")
    lines.extend(f"  {name:<20} {value:.6e}" for name, value in pair.residuals.items())
    return "\n".join(lines) + "\n"


def scan_text(report):
    lines = [f"{'level':<6} {'residual':<14} passes"]
    for record in report.levels:
        lines.append(f"{record.level:<6} {record.residual:<14.6e} {'yes' if record.passes else 'no'}")
    lines.append(report.summary)
    if report.note:
        lines.append(f"note: {report.note}")
    return "\n".join(lines) + "\n"


def verify_text(summary):
    lines = [f"seed = {summary.seed}, trials = {summary.trials}, tol = {summary.tol:g}"]
    for suite in summary.suites:
        lines.append(f"{suite.name:<12} {suite.checks:>7} checks {suite.failures:>5} failures")
        lines.extend(f"    {message}" for message in suite.messages)
    lines.append("PASS" if summary.passed else "FAIL")
    return "\n".join(lines) + "\n"


def matrix_element_text(result):
    lines = [f"order = {result['order']}", f"horizon = {result['horizon']!r}"]
    lines.extend(format_matrix("M", result["matrix"]))
    return "\n".join(lines) + "\n"
