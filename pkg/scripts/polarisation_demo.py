#!/usr/bin/env python3
"""Run the two-filter polarisation experiment and print the probabilities."""

import sys

from effectlogic.cli import main

if __name__ == "__main__":
    sys.exit(main(["demo", "polarisation"]))
