"""Mode-wise verification machinery for the hyperbolic Laplacian comparison.

Functions on the Poincare ball split into spherical-harmonic modes
``f = sum_k f_k(r) phi_k(sigma)`` with sphere eigenvalues ``c_k = k(n+k-2)``.
Orthonormality of the ``phi_k`` reduces every integral here to a 1-D radial
integral in the ball coordinate ``r``, so the harmonics themselves are never
synthesized pointwise.

On radial functions of ``r`` the hyperbolic Laplacian is

    L g = ((1-r^2)^2 / 4) (g'' + (n-1) g'/r) + (n-2) ((1-r^2)/2) r g',

and the comparison of the radial Laplacian with the full one decomposes
mode-by-mode: the weighted difference of squares contributed by mode k >= 1
equals ``c_k`` times the printed quadratic form (:func:`mode_form`), which
must be nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .constants import CaseParams, ValidityError, validity
from .functionals import Integrator, _Budget
from .geometry import ModelManifold
from .jets import Jet, RadialFunction, radial_laplacian
from .corpus import polynomial_bump

__all__ = [
    "ModeSpec",
    "mode_eigenvalue",
    "mode_profile",
    "hyperbolic_radial_laplacian",
    "ball_laplacian",
    "mode_form",
    "mow_compare",
    "mow_mode_rhs_direct",
    "coefficient_check",
    "CoefficientRow",
    "pointwise_positivity",
    "radial_weighted_hardy_check",
]


def mode_eigenvalue(n: int, k: int) -> float:
    """Sphere-Laplacian eigenvalue c_k = k(n+k-2)."""
    if n < 2 or k < 0:
        raise ValidityError(f"mode_eigenvalue needs n >= 2, k >= 0, got n={n}, k={k}")
    return float(k * (n + k - 2))


@dataclass(frozen=True)
class ModeSpec:
    """Mode index, its eigenvalue, and the radial profile f_k(r) = O(r^k)."""

    k: int
    eigenvalue: float
    profile: RadialFunction


def mode_profile(n: int, k: int, R: float = 0.8, m: int = 3) -> ModeSpec:
    """Profile r**k * (1 - (r/R)**2)**m in the ball coordinate."""
    if k < 0:
        raise ValidityError(f"k >= 0 required, got k={k}")
    bump = polynomial_bump(R, m)
    if k == 0:
        prof = bump.with_id(f"mode:k=0,R={R:g},m={m}")
    else:
        def jet_fn(r, order):
            j = Jet.variable(r, order) ** k * bump.jet(r, order)
            j.c[:, r >= R] = 0.0
            return j

        prof = RadialFunction(
            id=f"mode:k={k},R={R:g},m={m}",
            support=R,
            jet_fn=jet_fn,
            min_smoothness=m - 1,
            breakpoints=(R,),
        )
    return ModeSpec(k=k, eigenvalue=mode_eigenvalue(n, k), profile=prof)


def hyperbolic_radial_laplacian(n: int, F: RadialFunction, rho) -> float | np.ndarray:
    """F'' + (n-1) coth(rho) F': the radial Laplacian at curvature -1."""
    return radial_laplacian(ModelManifold(n, 1.0), F, rho)


def ball_laplacian(n: int, g: RadialFunction, r) -> np.ndarray:
    """Hyperbolic Laplacian of a radial function of the ball coordinate r."""
    r = np.asarray(r, dtype=float)
    j = g.jet(r, 2)
    gp = j.c[1]
    gpp = 2.0 * j.c[2]
    one = 1.0 - r * r
    lap_r = gpp + (n - 1) * gp / r
    return 0.25 * one * one * lap_r + 0.5 * (n - 2) * one * r * gp


def _rho_of_r(r: np.ndarray) -> np.ndarray:
    return np.log1p(r) - np.log1p(-r)


def _mode_weight_pieces(n: int, beta: float, r: np.ndarray):
    """(rho^-beta, S = sinh(rho) = 2r/(1-r^2), drho/dr = 2/(1-r^2))."""
    one = 1.0 - r * r
    s = 2.0 * r / one
    jac = 2.0 / one
    rho = _rho_of_r(r)
    return rho ** (-beta), s, jac


def mode_form(n: int, beta: float, k: int, f_k: RadialFunction,
              *, integrator: Optional[Integrator] = None) -> float:
    """The mode-k quadratic form whose nonnegativity carries the comparison:

        c_k * int f_k^2 rho^-beta ((1-r^2)/(2r))^4 dV
        - 2 * int f_k (L f_k) rho^-beta ((1-r^2)/(2r))^2 dV,

    reduced to radial integrals in r (angular factor dropped).
    """
    res = validity("mow", CaseParams(n=n, p=2.0, beta=beta, b=1.0))
    if not res.ok:
        raise ValidityError(res.reason)
    if k < 1:
        raise ValidityError(f"mode_form needs k >= 1, got k={k}")
    itg = integrator if integrator is not None else Integrator()
    ck = mode_eigenvalue(n, k)
    R = f_k.support

    def h1(r):
        w, s, jac = _mode_weight_pieces(n, beta, r)
        return f_k.value(r) ** 2 * w * s ** (n - 5) * jac

    def h2(r):
        w, s, jac = _mode_weight_pieces(n, beta, r)
        return f_k.value(r) * ball_laplacian(n, f_k, r) * w * s ** (n - 3) * jac

    key1 = ("mow_m1", f_k.id, n, beta)
    key2 = ("mow_m2", f_k.id, n, beta)
    m1, _ = itg.plain(h1, 0.0, R, bps=f_k.breakpoints, key=key1)
    m2, _ = itg.plain(h2, 0.0, R, bps=f_k.breakpoints, key=key2)
    return ck * m1 - 2.0 * m2


def _mode_lhs(n: int, beta: float, mode: ModeSpec, itg: Integrator) -> Tuple[float, float]:
    g = mode.profile

    def h(r):
        w, s, jac = _mode_weight_pieces(n, beta, r)
        return ball_laplacian(n, g, r) ** 2 * w * s ** (n - 1) * jac

    return itg.plain(h, 0.0, g.support, bps=g.breakpoints,
                     key=("mow_lhs", g.id, n, beta))


def mow_compare(n: int, beta: float, modes: Sequence[ModeSpec],
                *, integrator: Optional[Integrator] = None) -> Tuple[float, float, float]:
    """(lhs, rhs, slack) of the radial-vs-full Laplacian comparison.

    lhs integrates the squared radial Laplacian mode-wise; the difference
    rhs - lhs equals sum_k c_k * mode_form(k), which vanishes exactly when
    only the k = 0 mode is present (the equality clause).
    """
    res = validity("mow", CaseParams(n=n, p=2.0, beta=beta, b=1.0))
    if not res.ok:
        raise ValidityError(res.reason)
    if len(modes) > 16:
        raise ValidityError("mow_compare accepts at most 16 modes")
    itg = integrator if integrator is not None else Integrator()
    lhs = 0.0
    slack = 0.0
    for mode in modes:
        v, _ = _mode_lhs(n, beta, mode, itg)
        lhs += v
        if mode.k >= 1:
            slack += mode.eigenvalue * mode_form(n, beta, mode.k, mode.profile,
                                                 integrator=itg)
    return lhs, lhs + slack, slack


def mow_mode_rhs_direct(n: int, beta: float, mode: ModeSpec,
                        *, integrator: Optional[Integrator] = None) -> float:
    """Mode-k full-Laplacian integral by direct quadrature (test cross-check)."""
    itg = integrator if integrator is not None else Integrator()
    g = mode.profile
    ck = mode.eigenvalue

    def h(r):
        w, s, jac = _mode_weight_pieces(n, beta, r)
        val = ball_laplacian(n, g, r) - ck * g.value(r) / (s * s)
        return val ** 2 * w * s ** (n - 1) * jac

    v, _ = itg.plain(h, 0.0, g.support, bps=g.breakpoints,
                     key=("mow_rhs_direct", g.id, n, beta))
    return v


@dataclass(frozen=True)
class CoefficientRow:
    l: int
    leading: float
    series_coefficient: float
    ok: bool


def coefficient_check(n: int, beta: float, k: int, l_max: int) -> List[CoefficientRow]:
    """Positivity table for the mode comparison's series coefficients.

    Checks ((n-2+k)^2 + k^2 - (beta+2)^2)/2 > 0 together with
    (n-3) - beta(beta+1)/((l+1)(2l+1)) + beta(n-5)/(2l+1) >= 0 for l <= l_max.
    """
    if k < 1 or l_max < 1:
        raise ValidityError("coefficient_check needs k >= 1 and l_max >= 1")
    res = validity("mow", CaseParams(n=n, p=2.0, beta=beta, b=1.0))
    if not res.ok:
        raise ValidityError(res.reason)
    leading = ((n - 2 + k) ** 2 + k ** 2 - (beta + 2) ** 2) / 2.0
    rows = []
    for l in range(1, l_max + 1):
        coef = ((n - 3) - beta * (beta + 1) / ((l + 1) * (2 * l + 1))
                + beta * (n - 5) / (2 * l + 1))
        rows.append(CoefficientRow(l, leading, coef, leading > 0 and coef >= 0))
    return rows


def pointwise_positivity(n: int, beta: float, rho_grid) -> float:
    """Minimum over the grid of the k = 1 pointwise comparison expression.

    The expression's rho -> 0 limit is ((n-1)^2 + 1 - (beta+2)^2)/2; the
    contract is a strictly positive minimum on (0, 30].
    """
    res = validity("mow", CaseParams(n=n, p=2.0, beta=beta, b=1.0))
    if not res.ok:
        raise ValidityError(res.reason)
    rho = np.asarray(rho_grid, dtype=float)
    if np.any(rho <= 0):
        raise ValidityError("pointwise_positivity needs a grid in (0, 30]")
    ck = mode_eigenvalue(n, 1)
    sh = np.sinh(rho)
    ch = np.cosh(rho)
    sinhc = sh / rho
    expr = (ck + (n - beta - 4.0) ** 2 / 2.0 + 2.0 * sh * sh
            + 2.0 * (n - 4) * ch * ch
            - beta * (beta + 1.0) * sinhc * sinhc
            + beta * (n - 5.0) * np.sinh(2.0 * rho) / (2.0 * rho))
    return float(np.min(expr))


def radial_weighted_hardy_check(n: int, beta: float, F: RadialFunction,
                                *, integrator: Optional[Integrator] = None) -> float:
    """Slack of the sinh-weighted radial Hardy step used by the comparison:

        int F'^2 rho^-beta sinh^(n-3) - ((n-beta-4)^2/4) int F^2 rho^-beta sinh^(n-5),

    for beta < n - 4 strictly (the route needs the strict inequality).
    """
    if not beta < n - 4:
        raise ValidityError(f"beta < n-4 required, got beta={beta}, n={n}")
    if not -2 < beta:
        raise ValidityError(f"-2 < beta required, got beta={beta}")
    itg = integrator if integrator is not None else Integrator()
    bud = _Budget()

    def g1(rho):
        sinhc = np.sinh(rho) / rho
        return F.jet(rho, 1).c[1] ** 2 * sinhc ** (n - 3)

    def g2(rho):
        sinhc = np.sinh(rho) / rho
        return F.value(rho) ** 2 * sinhc ** (n - 5)

    lhs = bud.add(itg.power(g1, n - 3.0 - beta, F.support, bps=F.breakpoints,
                            key=("sosanh_lhs", F.id, n, beta)))
    rhs = bud.add(itg.power(g2, n - 5.0 - beta, F.support, bps=F.breakpoints,
                            key=("sosanh_rhs", F.id, n, beta)))
    return lhs - (n - beta - 4.0) ** 2 / 4.0 * rhs
