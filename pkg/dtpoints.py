#!/usr/bin/env python3
"""
dtpoints - command-line entry point.
"""

from dtpoints_app.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
