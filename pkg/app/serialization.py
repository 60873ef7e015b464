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

import json
import numbers

import numpy as np

from app.errors import SchemaError
from app.gauge import LevelRecord, LevelScanReport
from app.generator import ClassificationReport, ClassVerdict, Generator
from app.polar import PolarPair
from app.semigroups import StepFunction


def dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from e


def _require(obj, key, context):
    if not isinstance(obj, dict):
        raise SchemaError(f"{context} must be a JSON object")
    if key not in obj:
        raise SchemaError(f"{context} is missing '{key}'")
    return obj[key]


def _real(value, context):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise SchemaError(f"{context} must be a number, got {value!r}")
    return float(value)


def _integer(value, context):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{context} must be an integer, got {value!r}")
    return value


def encode_complex(z):
    return [float(np.real(z)), float(np.imag(z))]


def decode_complex(pair, context="entry"):
    if not isinstance(pair, list) or len(pair) != 2:
        raise SchemaError(f"{context} must be a [re, im] pair, got {pair!r}")
    return complex(_real(pair[0], context), _real(pair[1], context))


def encode_vector(v):
    return [encode_complex(z) for z in np.asarray(v).reshape(-1)]


def decode_vector(obj, context="vector"):
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{context} must be a non-empty array of [re, im] pairs")
    return np.array([decode_complex(pair, context) for pair in obj], dtype=complex)


def encode_matrix(M):
    return [encode_vector(row) for row in np.asarray(M)]


def decode_matrix(obj, context="matrix"):
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{context} must be a non-empty array of rows")
    rows = [decode_vector(row, context) for row in obj]
    if len({row.shape[0] for row in rows}) != 1:
        raise SchemaError(f"{context} has rows of different lengths")
    return np.array(rows)


def generator_to_dict(F):
    return {
        "dim_h": F.dim_h,
        "dim_k": F.dim_k,
        "A": encode_matrix(F.A),
        "B": encode_matrix(F.B),
        "C": encode_matrix(F.C),
        "D": encode_matrix(F.D),
    }


def generator_from_dict(obj, context="generator"):
    dims = [_integer(_require(obj, key, context), f"{context}.{key}") for key in ("dim_h", "dim_k")]
    blocks = [decode_matrix(_require(obj, key, context), f"{context}.{key}") for key in "ABCD"]
    return Generator(*dims, *blocks)


def step_function_to_dict(f):
    return {"segments": [{"dt": dt, "value": encode_vector(value)} for dt, value in f.segments]}


def step_function_from_dict(obj, context="step function"):
    segments = _require(obj, "segments", context)
    if not isinstance(segments, list) or not segments:
        raise SchemaError(f"{context}.segments must be a non-empty array")
    return StepFunction(
        tuple(
            (
                _real(_require(segment, "dt", context), f"{context}.dt"),
                decode_vector(_require(segment, "value", context), f"{context}.value"),
            )
            for segment in segments
        )
    )


def classification_to_dict(report):
    return {
        "tol": report.tol,
        "classes": {
            name: {
                "holds": record.holds,
                "witness": record.witness,
                "failing_pair": list(record.failing_pair) if record.failing_pair else None,
                "detail": record.detail,
            }
            for name, record in report.records.items()
        },
    }


def classification_from_dict(obj):
    classes = _require(obj, "classes", "classification report")
    records = {}
    for name, record in classes.items():
        pair = _require(record, "failing_pair", name)
        records[name] = ClassVerdict(
            holds=bool(_require(record, "holds", name)),
            witness=_real(_require(record, "witness", name), f"{name}.witness"),
            failing_pair=tuple(pair) if pair else None,
            detail=record.get("detail", ""),
        )
    return ClassificationReport(tol=_real(_require(obj, "tol", "classification report"), "tol"), records=records)


def polar_pair_to_dict(pair):
    return {
        "E": generator_to_dict(pair.E),
        "G": generator_to_dict(pair.G),
        "N": encode_matrix(pair.N),
        "L": encode_matrix(pair.L),
        "M": encode_matrix(pair.M),
        "K": encode_matrix(pair.K),
        "residuals": dict(pair.residuals),
    }


def polar_pair_from_dict(obj):
    residuals = _require(obj, "residuals", "polar pair")
    return PolarPair(
        E=generator_from_dict(_require(obj, "E", "polar pair"), "E"),
        G=generator_from_dict(_require(obj, "G", "polar pair"), "G"),
        N=decode_matrix(_require(obj, "N", "polar pair"), "N"),
        L=decode_matrix(_require(obj, "L", "polar pair"), "L"),
        M=decode_matrix(_require(obj, "M", "polar pair"), "M"),
        K=decode_matrix(_require(obj, "K", "polar pair"), "K"),
        residuals={name: _real(value, name) for name, value in residuals.items()},
    )


def scan_report_to_dict(report):
    return {
        "n_max": report.n_max,
        "levels": [
            {"level": record.level, "residual": record.residual, "passes": record.passes} for record in report.levels
        ],
        "first_failure": report.first_failure,
        "note": report.note,
    }


def scan_report_from_dict(obj):
    levels = tuple(
        LevelRecord(
            level=_integer(_require(record, "level", "level record"), "level"),
            residual=_real(_require(record, "residual", "level record"), "residual"),
            passes=bool(_require(record, "passes", "level record")),
        )
        for record in _require(obj, "levels", "scan report")
    )
    return LevelScanReport(
        n_max=_integer(_require(obj, "n_max", "scan report"), "n_max"),
        levels=levels,
        first_failure=obj.get("first_failure"),
        note=obj.get("note", ""),
    )


def matelem_input_from_dict(obj):
    """{"generator": ..., "f": ..., "g": ...}"""
    return (
        generator_from_dict(_require(obj, "generator", "input"), "generator"),
        step_function_from_dict(_require(obj, "f", "input"), "f"),
        step_function_from_dict(_require(obj, "g", "input"), "g"),
    )


def gauge_input_from_dict(obj):
    """{"dim_h", "dim_k", "D"}; a full generator object is accepted and its D used."""
    if isinstance(obj, dict) and "A" in obj:
        F = generator_from_dict(obj)
        return F.D, F.dim_h, F.dim_k
    dim_h = _integer(_require(obj, "dim_h", "input"), "dim_h")
    dim_k = _integer(_require(obj, "dim_k", "input"), "dim_k")
    return decode_matrix(_require(obj, "D", "input"), "D"), dim_h, dim_k


def verify_summary_to_dict(summary):
    return {
        "seed": summary.seed,
        "trials": summary.trials,
        "tol": summary.tol,
        "passed": summary.passed,
        "checks": summary.checks,
        "failures": summary.failures,
        "suites": [
            {"name": suite.name, "checks": suite.checks, "failures": suite.failures, "messages": list(suite.messages)}
            for suite in summary.suites
        ],
    }


def matrix_element_to_dict(result):
    return {"order": result["order"], "horizon": result["horizon"], "matrix": encode_matrix(result["matrix"])}
