#!/usr/bin/env python3
"""Run the seeded-defect corpus with default settings and print the table.

Equivalent to `repair --corpus corpus --out out/corpus`.
"""

import sys
from pathlib import Path

from minirepair.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    argv = ["--corpus", str(ROOT / "corpus"), "--out", str(ROOT / "out" / "corpus")]
    sys.exit(main(argv + sys.argv[1:]))
