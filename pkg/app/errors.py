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


class LabError(Exception):
    """Base class for every error raised by the numeric modules."""


# --- numkit ---
class ShapeError(LabError):
    pass


class DimMismatch(ShapeError):
    pass


class NotHermitian(LabError):
    pass


class NoConvergence(LabError):
    pass


class DomainError(LabError):
    pass


class DominationFailed(LabError):
    pass


# --- generator classes and transforms ---
class NotPositiveGenerator(LabError):
    pass


class NotPositiveContractionGenerator(LabError):
    pass


class SpectrumOutOfRange(LabError):
    pass


class NotContraction(LabError):
    pass


class NotCommutative(LabError):
    pass


# --- semigroups ---
class HorizonMismatch(LabError):
    pass


class MissingEntry(LabError):
    pass


# --- gauge ---
class BudgetExceeded(LabError):
    pass


class WrongNoiseDim(LabError):
    pass


# --- JSON ---
class SchemaError(LabError):
    pass


# Raised by a command whose input does not belong to the class it requires.
PRECONDITION_ERRORS = (
    NotContraction,
    NotCommutative,
    NotPositiveGenerator,
    NotPositiveContractionGenerator,
    SpectrumOutOfRange,
)
