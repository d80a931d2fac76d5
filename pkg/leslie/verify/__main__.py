"""
Module loaded when running the identity suites.

See `leslie.verify` for the main content.
"""

import sys
from leslie.verify import PARSER, main

sys.exit(main(PARSER.parse_args()))
