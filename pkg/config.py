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

import os

from dotenv import load_dotenv

basedir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(basedir, ".env"))


def _number_from_env(name, default, cast):
    """Reads a numeric setting, falling back to the default when it is malformed."""
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        print(f"WARNING: {name} is malformed. Using default.")
        return default


class Config:
    """Base config."""

    # --- Numerical tolerances ---
    # Relative: a test against tol compares with tol * (1 + ||M||).
    COCYCLE_LAB_TOL = _number_from_env("COCYCLE_LAB_TOL", 1e-9, float)
    COCYCLE_LAB_RANK_TOL = _number_from_env("COCYCLE_LAB_RANK_TOL", 1e-9, float)

    # --- Gauge scans ---
    # Largest dimension of h (x) k^n a scan may build.
    GAUGE_DIM_BUDGET = _number_from_env("GAUGE_DIM_BUDGET", 4096, int)
    GAUGE_N_MAX = _number_from_env("GAUGE_N_MAX", 4, int)

    # --- Verification suites ---
    VERIFY_SEED = _number_from_env("VERIFY_SEED", 0, int)
    VERIFY_TRIALS = _number_from_env("VERIFY_TRIALS", 100, int)

    # --- Reports ---
    REPORT_FORMAT = os.environ.get("REPORT_FORMAT", "text").lower()
    if REPORT_FORMAT not in ("text", "json"):
        print("WARNING: REPORT_FORMAT is malformed. Using default.")
        REPORT_FORMAT = "text"

    LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING").upper()
