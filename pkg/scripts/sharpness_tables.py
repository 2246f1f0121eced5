#!/usr/bin/env python3
"""Print the four extremizer-family sweeps side by side.

Each table shows the Rayleigh quotient approaching the sharp constant from
above as the scale degenerates; the hardy family is run at both curvature
bounds to show the limit is curvature-independent.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from hardylab.constants import CaseParams  # noqa: E402
from hardylab.corpus import ExtremizerFamily  # noqa: E402
from hardylab.functionals import Integrator, sharpness_sweep  # noqa: E402

SWEEPS = [
    ("hardy", CaseParams(4, 2.0, 0.0, 0.0), [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]),
    ("hardy", CaseParams(4, 2.0, 0.0, 1.0), [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]),
    ("critical", CaseParams(3, 2.0, 1.0, 0.0), [0.2, 0.1, 0.05, 0.02]),
    ("onetwo", CaseParams(3, 2.0, 0.0, 0.0), [1e-2, 1e-4, 1e-6]),
    ("rellich2", CaseParams(5, 2.0, 0.0, 0.0), [1e-2, 1e-4, 1e-6]),
]

if __name__ == "__main__":
    itg = Integrator()
    for family, prm, scales in SWEEPS:
        fam = ExtremizerFamily(family, prm)
        print(f"\n{family}  n={prm.n} p={prm.p} beta={prm.beta} b={prm.b}  "
              f"sharp constant {fam.sharp_constant():.10g}")
        print(f"{'scale':>10s} {'quotient':>16s} {'gap':>16s}")
        for row in sharpness_sweep(fam, scales, integrator=itg):
            print(f"{row.scale:>10.2e} {row.quotient:>16.10f} {row.gap:>16.10f}")
