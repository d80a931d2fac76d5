"""
Module loaded when running `python -m leslie`.

See `leslie.cli` for the main content.
"""

import sys
from leslie.cli import PARSER, main

sys.exit(main(PARSER.parse_args()))
