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

from flask import Blueprint

# Commands are attached to the application's own command group.
bp = Blueprint("lab", __name__, cli_group=None)

from app.cli import commands  # noqa: E402, F401
