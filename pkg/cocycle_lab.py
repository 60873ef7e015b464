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
#
# This is the entry point of the lab commands.
# Example usage: python cocycle_lab.py classify generator.json
# or:            flask --app cocycle_lab classify generator.json
from flask.cli import FlaskGroup

from app import create_app

application = create_app()

cli = FlaskGroup(create_app=lambda: application, add_default_commands=False)


if __name__ == "__main__":
    cli()
