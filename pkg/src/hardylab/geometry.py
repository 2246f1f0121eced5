"""Closed-form radial geometry of constant negative-curvature model spaces.

A model space of dimension ``n`` with sectional curvature ``-b`` (``b >= 0``)
carries the radial volume density

    J_b(t) = (sinh(sqrt(b) t) / (sqrt(b) t))**(n - 1),

with ``b = 0`` degenerating to the flat case ``J_0 = 1``.  Everything in this
module is an elementary function of a single radius variable; near ``t = 0``
the naive formulas cancel catastrophically (``t*coth(t) - 1`` is ``O(t^2)``),
so small arguments are routed through short Taylor series.

All functions accept floats or numpy arrays, are pure, and share no state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

__all__ = [
    "DomainError",
    "ProfileValidationError",
    "ModelManifold",
    "DensityProfile",
    "ct",
    "dd",
    "density",
    "density_log_deriv",
    "measure_weight",
    "rho_from_r",
    "r_from_rho",
    "coth_gap_lower_bound",
]

PI_SQ = math.pi ** 2

# sqrt(b)*t below this is evaluated by the order-6 series of D_b; the series
# remainder there is < 1e-24 relative, far below the direct formula's
# cancellation error at the crossover.
_SMALL = 1e-3
# above this, log(sinh x / x) uses the shifted form to dodge sinh overflow
_BIG = 20.0
# exp(w) with w above this overflows double precision
_EXP_MAX = 700.0


class DomainError(ValueError):
    """An argument lies outside the documented domain."""


class ProfileValidationError(ValueError):
    """A user-supplied radial density fails the comparison-bound check."""


def _arr(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite argument")
    return a


def _ret(a):
    a = np.asarray(a)
    return a if a.shape else float(a)


@dataclass(frozen=True)
class ModelManifold:
    """Dimension and curvature bound of a constant-curvature model space.

    ``n >= 2`` is the dimension, ``b >= 0`` the curvature bound (sectional
    curvature identically ``-b``); ``b = 0`` reproduces Euclidean formulas
    exactly.
    """

    n: int
    b: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise DomainError(f"dimension n must be an integer >= 2, got {self.n!r}")
        if not math.isfinite(self.b) or self.b < 0:
            raise DomainError(f"curvature bound b must be finite and >= 0, got {self.b!r}")


def dd(b: float, t) -> float | np.ndarray:
    """Curvature defect D_b(t) = t*ct_b(t) - 1, with D_b(0) = 0.

    Always nonnegative; D_0 is identically zero.
    """
    if b < 0 or not math.isfinite(b):
        raise DomainError("curvature bound b must be finite and >= 0")
    t = _arr(t)
    if np.any(t < 0):
        raise DomainError("dd requires t >= 0")
    x = math.sqrt(b) * t
    small = x < _SMALL
    x2 = np.where(small, x, 0.0) ** 2
    series = x2 / 3.0 - x2 * x2 / 45.0 + 2.0 * x2 ** 3 / 945.0
    xl = np.where(small, 1.0, x)
    direct = xl / np.tanh(xl) - 1.0
    return _ret(np.where(small, series, direct))


def ct(b: float, t) -> float | np.ndarray:
    """ct_b(t): 1/t for b = 0, sqrt(b)*coth(sqrt(b)*t) for b > 0 (t > 0).

    Continuous in b at 0+: implemented as (1 + D_b(t)) / t, which reduces to
    1/t exactly when b = 0.
    """
    t = _arr(t)
    if np.any(t <= 0):
        raise DomainError("ct requires t > 0")
    return _ret((1.0 + dd(b, t)) / t)


def _log_sinhc(x: np.ndarray) -> np.ndarray:
    """log(sinh(x)/x) for x >= 0, stable at both ends."""
    small = x < _SMALL
    big = x > _BIG
    mid = ~(small | big)
    out = np.empty_like(x)
    xs = x[small]
    x2 = xs * xs
    out[small] = x2 / 6.0 - x2 * x2 / 180.0 + x2 ** 3 / 2835.0
    xm = x[mid]
    out[mid] = np.log(np.sinh(xm) / xm)
    xb = x[big]
    out[big] = xb - np.log(2.0 * xb) + np.log1p(-np.exp(-2.0 * xb))
    return out


def density(m: ModelManifold, t) -> float | np.ndarray:
    """Radial volume density J_b(t) = (sinh(sqrt(b) t)/(sqrt(b) t))**(n-1).

    Returns 1 identically for b = 0.  Raises OverflowError instead of
    returning infinity when (n-1)*sqrt(b)*t is large enough to overflow.
    """
    t = _arr(t)
    if np.any(t <= 0):
        raise DomainError("density requires t > 0")
    if m.b == 0.0:
        return _ret(np.ones_like(t))
    w = (m.n - 1) * _log_sinhc(math.sqrt(m.b) * t)
    if np.any(w > _EXP_MAX):
        raise OverflowError("density overflows double precision for this sqrt(b)*t")
    return _ret(np.exp(w))


def density_log_deriv(m: ModelManifold, t) -> float | np.ndarray:
    """J_b'(t)/J_b(t) = (n-1) * D_b(t) / t for t > 0."""
    t = _arr(t)
    if np.any(t <= 0):
        raise DomainError("density_log_deriv requires t > 0")
    return _ret((m.n - 1) * dd(m.b, t) / t)


def measure_weight(m: ModelManifold, t) -> float | np.ndarray:
    """Radial measure density t**(n-1) * J_b(t).

    Integrating a radial function against this weight over (0, inf) gives its
    volume integral up to the angular factor |S^(n-1)|, which callers apply.
    """
    t = _arr(t)
    if np.any(t <= 0):
        raise DomainError("measure_weight requires t > 0")
    return _ret(t ** (m.n - 1) * density(m, t))


def rho_from_r(r) -> float | np.ndarray:
    """Geodesic radius of a Poincare-ball point: rho = log((1+r)/(1-r))."""
    r = _arr(r)
    if np.any((r < 0) | (r >= 1)):
        raise DomainError("rho_from_r requires 0 <= r < 1")
    return _ret(np.log1p(r) - np.log1p(-r))


def r_from_rho(rho) -> float | np.ndarray:
    """Ball radius of a geodesic radius: r = (e^rho - 1)/(e^rho + 1) = tanh(rho/2)."""
    rho = _arr(rho)
    if np.any(rho < 0):
        raise DomainError("r_from_rho requires rho >= 0")
    return _ret(np.tanh(0.5 * rho))


def coth_gap_lower_bound(t) -> Tuple[float | np.ndarray, float | np.ndarray]:
    """The pair (t*coth(t) - 1, 3 t^2 / (pi^2 + t^2)); the first dominates."""
    t = _arr(t)
    if np.any(t <= 0):
        raise DomainError("coth_gap_lower_bound requires t > 0")
    lhs = dd(1.0, t)
    rhs = 3.0 * t * t / (PI_SQ + t * t)
    return _ret(lhs), _ret(rhs)


@dataclass(frozen=True)
class DensityProfile:
    """A radial density t -> (J(t), J'(t)) paired with a dimension.

    The model-space instance is exact; user-supplied profiles are the hook for
    exploring the inequalities under a general monotone density, and must pass
    :meth:`validate_for_bound` for a declared curvature bound before any
    quantitative-improvement case may use them.
    """

    n: int
    evaluate: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]

    @staticmethod
    def for_model(m: ModelManifold) -> "DensityProfile":
        def _eval(t):
            j = density(m, t)
            return j, j * density_log_deriv(m, t)

        return DensityProfile(n=m.n, evaluate=_eval)

    def validate_for_bound(self, b: float, grid=None) -> None:
        """Check J(0+) = 1, J >= 1, J' >= 0 and J'/J >= (n-1) D_b(t)/t.

        Raises ProfileValidationError naming the first violated condition.
        """
        if grid is None:
            grid = np.concatenate([[1e-8, 1e-4], np.linspace(0.01, 10.0, 400)])
        grid = _arr(grid)
        j, jp = self.evaluate(grid)
        j = np.asarray(j, dtype=float)
        jp = np.asarray(jp, dtype=float)
        tol = 1e-9
        if abs(float(np.asarray(self.evaluate(np.asarray([1e-10]))[0])[0]) - 1.0) > 1e-6:
            raise ProfileValidationError("J(0+) != 1")
        if np.any(j < 1.0 - tol):
            raise ProfileValidationError("J < 1 somewhere on the validation grid")
        if np.any(jp < -tol * np.maximum(j, 1.0)):
            raise ProfileValidationError("J' < 0 somewhere on the validation grid")
        bound = (self.n - 1) * dd(b, grid) / grid
        if np.any(jp / j < bound * (1.0 - 1e-9) - tol):
            raise ProfileValidationError(
                f"J'/J falls below the comparison bound for b={b} on the validation grid"
            )
