#!/usr/bin/env python3
"""Run the default verification grid and write the CSV report.

Equivalent to `hardylab verify --out reports/suite.csv`; kept as a script so
the default experiment is one command from a fresh checkout.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hardylab.cli import main  # noqa: E402

if __name__ == "__main__":
    out = pathlib.Path(__file__).resolve().parents[1] / "reports"
    out.mkdir(exist_ok=True)
    sys.exit(main(["verify", "--out", str(out / "suite.csv"), "--jobs", "2"]))
