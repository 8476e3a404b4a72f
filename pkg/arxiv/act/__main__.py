"""Run the command line with ``python -m arxiv.act``."""

import sys

from .cli import main

sys.exit(main())
