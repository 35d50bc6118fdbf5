import sys

from src.vage_spaces.cli.commands import run


def main():
    """Main entry point for the application."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
