import sys

from src.controllers.cli_controller import CliController


def create_app():
    return CliController()


def main(argv=None) -> int:
    app = create_app()
    return app.run(argv)


if __name__ == '__main__':
    sys.exit(main())
