"""
Main entrypoint for the vireid re-ranking and evaluation engine.
Delegates to the command-line front-end; see ``python main.py --help``.
"""
import sys

from vireid.cli import main

if __name__ == "__main__":
    sys.exit(main())
