"""The library of radial test functions.

Smooth compactly supported profiles (polynomial bumps and an exponential-
quotient cutoff) plus the four extremizer families used in the sharpness
sweeps.  The cutoff is pinned to one concrete realization

    phi(t) = H(b-t) / (H(b-t) + H(t-a)),   H(s) = exp(-1/s) for s > 0 else 0,

so all results are reproducible bit for bit; sharpness limits do not depend
on the choice.

Corpus members are addressable by string id ("bump:R=1,m=4",
"hardy_ext:eps=1e-4", ...) for CLI configs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import CaseParams, ValidityError, validity
from .geometry import DomainError
from .jets import Jet, PowerSeries, RadialFunction

__all__ = [
    "Cutoff",
    "ExtremizerFamily",
    "smooth_cutoff",
    "polynomial_bump",
    "hardy_extremizer",
    "critical_extremizer",
    "onetwo_extremizer",
    "rellich2_extremizer",
    "zero_function",
    "linear_combination",
    "from_id",
    "SCALE_FLOOR",
]

# smallest admissible extremizer scale: keeps every integral inside the
# double-precision dynamic range after the log substitution
SCALE_FLOOR = 1e-8


@dataclass(frozen=True)
class Cutoff:
    """Plateau/decay boundaries of a smooth cutoff: 1 on [0, inner], 0 from outer on."""

    inner: float
    outer: float

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise DomainError(f"cutoff needs 0 < inner < outer, got {self.inner}, {self.outer}")


def _cutoff_jet(cut: Cutoff, rho: np.ndarray, order: int) -> Jet:
    a, b = cut.inner, cut.outer
    c = np.zeros((order + 1,) + rho.shape)
    c[0][rho <= a] = 1.0
    mid = (rho > a) & (rho < b)
    if np.any(mid):
        r = Jet.variable(rho[mid], order)
        hb = (-(b - r).reciprocal()).exp()      # H(b - t)
        ha = (-(r - a).reciprocal()).exp()      # H(t - a)
        phi = hb / (hb + ha)
        c[:, mid] = phi.c
    return Jet(c)


def smooth_cutoff(a: float, b: float) -> RadialFunction:
    """The C-infinity cutoff that is 1 on [0, a] and 0 from b on, nonincreasing."""
    cut = Cutoff(a, b)
    return RadialFunction(
        id=f"cutoff:a={a:g},b={b:g}",
        support=b,
        jet_fn=lambda rho, order: _cutoff_jet(cut, rho, order),
        min_smoothness=None,
        series0=PowerSeries(0, np.array([1.0])),
        series0_radius=a,
        breakpoints=(a, b),
    )


def polynomial_bump(R: float, m: int) -> RadialFunction:
    """f(rho) = (1 - (rho/R)**2)**m on [0, R), else 0; C^(m-1) at the edge."""
    if R <= 0 or m < 2:
        raise DomainError("polynomial_bump needs R > 0 and integer m >= 2")
    coeffs = np.zeros(2 * m + 1)
    for j in range(m + 1):
        coeffs[2 * j] = math.comb(m, j) * (-1.0) ** j / R ** (2 * j)

    def jet_fn(rho, order):
        u = 1.0 - (Jet.variable(rho, order) * (1.0 / R)) ** 2
        j = u ** m
        j.c[:, rho >= R] = 0.0
        return j

    return RadialFunction(
        id=f"bump:R={R:g},m={m}",
        support=R,
        jet_fn=jet_fn,
        min_smoothness=m - 1,
        series0=PowerSeries(0, coeffs),
        series0_radius=R,
        breakpoints=(R,),
    )


def zero_function(R: float = 1.0) -> RadialFunction:
    """The identically-zero profile (degenerate input checks)."""
    return RadialFunction(
        id="zero",
        support=R,
        jet_fn=lambda rho, order: Jet(np.zeros((order + 1,) + rho.shape)),
        min_smoothness=None,
        series0=PowerSeries(0, np.array([0.0])),
        series0_radius=R,
    )


def linear_combination(ca: float, fa: RadialFunction, cb: float, fb: RadialFunction) -> RadialFunction:
    """ca*fa + cb*fb as a corpus member (used by linearity tests)."""
    smooth = None
    if fa.min_smoothness is not None or fb.min_smoothness is not None:
        smooth = min(s for s in (fa.min_smoothness, fb.min_smoothness) if s is not None)
    series0 = None
    radius = 0.0
    if fa.series0 is not None and fb.series0 is not None:
        series0 = fa.series0.scaled(ca).plus(fb.series0.scaled(cb))
        radius = min(fa.series0_radius, fb.series0_radius)
    return RadialFunction(
        id=f"lincomb({ca:g}*{fa.id},{cb:g}*{fb.id})",
        support=max(fa.support, fb.support),
        jet_fn=lambda rho, order: fa.jet(rho, order) * ca + fb.jet(rho, order) * cb,
        min_smoothness=smooth,
        series0=series0,
        series0_radius=radius,
        breakpoints=tuple(sorted(set(fa.breakpoints) | set(fb.breakpoints))),
    )


def _power_law_family(
    family: str,
    params: CaseParams,
    scale: float,
    kappa: float,
    cut: Cutoff,
    tag: str,
) -> RadialFunction:
    """phi(rho) * (1 - phi(rho/scale)) * rho**(-kappa) with phi = the pinned cutoff."""
    if not SCALE_FLOOR <= scale <= 0.25:
        raise DomainError(f"{family} extremizer scale must lie in [{SCALE_FLOOR:g}, 0.25]")
    inner_lo = cut.inner * scale

    def jet_fn(rho, order):
        outer = _cutoff_jet(cut, rho, order)
        inner = _cutoff_jet(cut, rho / scale, order)
        inner = Jet(inner.c * (1.0 / scale) ** np.arange(order + 1).reshape(
            (-1,) + (1,) * rho.ndim))
        power = Jet.variable(rho, order).pow_real(-kappa)
        j = outer * (1.0 - inner) * power
        dead = (rho <= inner_lo) | (rho >= cut.outer)
        j.c[:, dead] = 0.0
        return j

    return RadialFunction(
        id=f"{tag}:scale={scale:g}",
        support=cut.outer,
        support_lo=inner_lo,
        jet_fn=jet_fn,
        min_smoothness=None,
        breakpoints=(inner_lo, cut.outer * scale, cut.inner, cut.outer),
    )


def hardy_extremizer(params: CaseParams, eps: float) -> RadialFunction:
    """phi(rho)(1 - phi(rho/eps)) rho**(-(n-p-beta)/p) with phi = cutoff(1, 2)."""
    res = validity("hardy", params)
    if not res.ok:
        raise ValidityError(res.reason)
    kappa = (params.n - params.p - params.beta) / params.p
    return _power_law_family("hardy", params, eps, kappa, Cutoff(1.0, 2.0), "hardy_ext")


def onetwo_extremizer(params: CaseParams, delta: float) -> RadialFunction:
    """phi(rho)(1 - phi(rho/delta)) rho**(-(n-p-beta)/p) with phi = cutoff(1/2, 1)."""
    res = validity("onetwo", params)
    if not res.ok:
        raise ValidityError(res.reason)
    kappa = (params.n - params.p - params.beta) / params.p
    return _power_law_family("onetwo", params, delta, kappa, Cutoff(0.5, 1.0), "onetwo_ext")


def rellich2_extremizer(params: CaseParams, delta: float) -> RadialFunction:
    """phi(rho)(1 - phi(rho/delta)) rho**(-(n-2p-beta)/p) with phi = cutoff(1/2, 1)."""
    res = validity("rellich2", params)
    if not res.ok:
        raise ValidityError(res.reason)
    kappa = (params.n - 2 * params.p - params.beta) / params.p
    return _power_law_family("rellich2", params, delta, kappa, Cutoff(0.5, 1.0), "rellich2_ext")


def critical_extremizer(params: CaseParams, delta: float) -> RadialFunction:
    """(log(1/rho))**((p-1)/p - delta) * phi(rho) with phi = cutoff(1/2, 1).

    The admissible range (0, (p-1)/(2p)) keeps the log exponent positive.
    """
    p = params.p
    if p <= 1:
        raise ValidityError(f"p > 1 required, got p={p}")
    if not SCALE_FLOOR <= delta < (p - 1) / (2 * p) + 1e-15:
        raise ValidityError(
            f"critical extremizer needs delta in [{SCALE_FLOOR:g}, (p-1)/(2p)], got {delta}")
    s = (p - 1.0) / p - delta
    phi = smooth_cutoff(0.5, 1.0)

    def jet_fn(rho, order):
        c = np.zeros((order + 1,) + rho.shape)
        inside = (rho > 0) & (rho < 1.0)
        if np.any(inside):
            r = Jet.variable(rho[inside], order)
            t = -r.log()
            j = t.pow_real(s) * _cutoff_jet(Cutoff(0.5, 1.0), rho[inside], order)
            c[:, inside] = j.c
        return Jet(c)

    return RadialFunction(
        id=f"critical_ext:delta={delta:g}",
        support=1.0,
        jet_fn=jet_fn,
        min_smoothness=None,
        breakpoints=(0.5, 1.0),
        log_power=s,
        log_regular=phi,
    )


@dataclass(frozen=True)
class ExtremizerFamily:
    """One of the four sharpness families, with its scale semantics."""

    family: str                  # hardy | critical | onetwo | rellich2
    params: CaseParams
    scale_name: str = "eps"

    _BUILDERS = None  # filled below

    def build(self, scale: float) -> RadialFunction:
        builder = {
            "hardy": hardy_extremizer,
            "critical": critical_extremizer,
            "onetwo": onetwo_extremizer,
            "rellich2": rellich2_extremizer,
        }[self.family]
        return builder(self.params, scale)

    def sharp_constant(self) -> float:
        n, p, beta = self.params.n, self.params.p, self.params.beta
        if self.family == "hardy":
            return ((n - p - beta) / p) ** p
        if self.family == "critical":
            return ((p - 1.0) / p) ** p
        if self.family == "onetwo":
            return ((n * (p - 1) + beta) / p) ** p
        if self.family == "rellich2":
            return ((n * (p - 1) + beta) * (n - 2 * p - beta) / p ** 2) ** p
        raise KeyError(self.family)


def from_id(ident: str, params: Optional[CaseParams] = None) -> RadialFunction:
    """Build a corpus member from its string id.

    Extremizer ids need ``params`` for the exponent, e.g.
    ``from_id("hardy_ext:eps=1e-4", params)``.
    """
    name, _, argstr = ident.partition(":")
    kwargs = {}
    if argstr:
        for item in argstr.split(","):
            key, _, val = item.partition("=")
            kwargs[key.strip()] = float(val)
    if name == "bump":
        return polynomial_bump(kwargs.get("R", 1.0), int(kwargs.get("m", 4)))
    if name == "cutoff":
        return smooth_cutoff(kwargs.get("a", 0.5), kwargs.get("b", 1.0))
    if name == "zero":
        return zero_function(kwargs.get("R", 1.0))
    if name in ("hardy_ext", "critical_ext", "onetwo_ext", "rellich2_ext"):
        if params is None:
            raise ValueError(f"{name} needs case parameters")
        family = name.removesuffix("_ext")
        if name == "critical_ext":
            scale = kwargs.get("delta")
        else:
            scale = kwargs.get("eps", kwargs.get("delta", kwargs.get("scale")))
        if scale is None:
            raise ValueError(f"{ident!r} is missing its scale parameter")
        return ExtremizerFamily(family, params).build(scale)
    raise KeyError(f"unknown corpus id {ident!r}")
