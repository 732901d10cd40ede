"""Command line entry point, e.g.

    python bin/modular_flags_cli.py simple C4 0001 -p 2 --format text
    python bin/modular_flags_cli.py stabilizer C4 0001 -p 2 --check-reference-table C4
    python bin/modular_flags_cli.py incidence --n 2 --p 3 --r 1 --a 3 --b 1 --oracle
"""
import sys

from modular_flags.cli import main

if __name__ == "__main__":
    sys.exit(main())
