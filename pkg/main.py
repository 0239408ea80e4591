#!/usr/bin/env python3
"""
RISOFDM entry point.

Runs the command-line interface; this file is also the PyInstaller target
used by build.sh.
"""

import sys

from risofdm.cli import main

if __name__ == '__main__':
    sys.exit(main())
