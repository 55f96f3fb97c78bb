# KSCAT
# Copyright (C) 2025 The kscat authors
"""Entry point for `python -m kscat`."""

import sys

from kscat.cli import main

if __name__ == "__main__":
    sys.exit(main())
