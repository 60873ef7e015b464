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

from flask import Flask

from config import Config


def create_app(config_class=Config):
    """
    The application factory. The app carries configuration, the logger and
    the lab commands; it serves no routes.
    """
    app = Flask(__name__)
    app.config.from_object(config_class)
    app.logger.setLevel(app.config["LOG_LEVEL"])

    # Register blueprints
    from app.cli import bp as cli_bp

    app.register_blueprint(cli_bp)

    return app
