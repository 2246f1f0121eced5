"""hardylab: desk-scale numerical verification of sharp radial Hardy and
Rellich inequalities on constant-curvature model spaces."""

from .constants import CaseParams, ValidityError, validity
from .corpus import (ExtremizerFamily, critical_extremizer, hardy_extremizer,
                     onetwo_extremizer, polynomial_bump, rellich2_extremizer,
                     smooth_cutoff)
from .functionals import (InequalityCase, Integrator, VerificationReport,
                          evaluate_case, hyperbolic_weight_constant,
                          identity_residual, quantitative_case, remainder_rp,
                          sharpness_sweep)
from .geometry import DensityProfile, ModelManifold
from .jets import Jet, RadialFunction

__version__ = "0.1.0"

__all__ = [
    "CaseParams", "ValidityError", "validity",
    "ExtremizerFamily", "critical_extremizer", "hardy_extremizer",
    "onetwo_extremizer", "polynomial_bump", "rellich2_extremizer",
    "smooth_cutoff",
    "InequalityCase", "Integrator", "VerificationReport", "evaluate_case",
    "hyperbolic_weight_constant", "identity_residual", "quantitative_case",
    "remainder_rp", "sharpness_sweep",
    "DensityProfile", "ModelManifold",
    "Jet", "RadialFunction",
    "__version__",
]
