#!/usr/bin/env python
"""Command-line utility for planarpoly experiments."""
import os
import sys


def main():
    """Run experiment commands."""
    os.environ.setdefault('PLANAR_SETTINGS_MODULE', 'config.settings.local')
    try:
        from planarpoly.cli import cli
    except ImportError as exc:
        raise ImportError(
            "Couldn't import planarpoly. Are the numerical dependencies "
            "(numpy, scipy, click) installed and available on your "
            "PYTHONPATH environment variable? Did you forget to activate "
            "a virtual environment?"
        ) from exc
    cli.main(args=sys.argv[1:], prog_name='manage.py')


if __name__ == '__main__':
    main()
