"""Truncated Taylor-jet arithmetic and the radial differential operators.

A :class:`Jet` stores the coefficients ``f^(k)(c)/k!`` of a function at a
center ``c`` (vectorized over centers), closed under the arithmetic needed by
the test-function corpus: sums, products, quotients, real powers, exp/log and
sinh/cosh.  Radial operators (``d/drho``, the radial Laplacian and its
iterates) are assembled from jets away from the origin.

Near ``rho = 0`` the Laplacian coefficient ``(n-1)/rho`` makes jet arithmetic
cancel catastrophically for smooth even profiles, so functions that know
their Taylor series at 0 carry a :class:`PowerSeries` and iterated Laplacians
are applied term-by-term there instead (the series route is exact for the
polynomial corpus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .geometry import DomainError, ModelManifold

__all__ = [
    "ContractError",
    "Jet",
    "PowerSeries",
    "RadialFunction",
    "radial_derivative",
    "radial_laplacian",
    "radial_laplacian_power",
    "drho_laplacian_power",
    "MAX_LAPLACIAN_POWER",
    "NEAR_ZERO_CROSSOVER",
]

MAX_LAPLACIAN_POWER = 4
# below this radius, functions with a series at 0 switch to the series route
NEAR_ZERO_CROSSOVER = 0.05


class ContractError(ValueError):
    """An operation was called outside its smoothness/order contract."""


class Jet:
    """Truncated Taylor coefficients c[k] = f^(k)(center)/k!, vectorized.

    ``coeffs`` has shape ``(order+1,) + centers.shape``; all operations
    truncate to the smaller order of the operands.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def variable(x, order: int) -> "Jet":
        x = np.asarray(x, dtype=float)
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return Jet(c)

    @staticmethod
    def constant(v, order: int, shape: Tuple[int, ...] = ()) -> "Jet":
        v = np.asarray(v, dtype=float)
        c = np.zeros((order + 1,) + np.broadcast_shapes(v.shape, shape))
        c[0] = v
        return Jet(c)

    # -- basics --------------------------------------------------------------

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    def deriv(self, k: int):
        """k-th derivative values at the centers."""
        return self.c[k] * math.factorial(k)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.c[: order + 1]) if order < self.order else self

    def d(self) -> "Jet":
        """Jet of the derivative (one order lower)."""
        if self.order < 1:
            raise ContractError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet(self.c[1:] * k)

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other: "Jet"):
        m = min(self.order, other.order)
        return self.c[: m + 1], other.c[: m + 1], m

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b, _ = self._pair(other)
            return Jet(a + b)
        out = self.c.copy()
        out[0] = out[0] + other
        return Jet(out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -np.asarray(other, dtype=float))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        a, b, m = self._pair(other)
        out = np.zeros_like(a)
        for k in range(m + 1):
            for j in range(k + 1):
                out[k] += a[j] * b[k - j]
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        a = self.c
        out = np.zeros_like(a)
        out[0] = 1.0 / a[0]
        for k in range(1, a.shape[0]):
            s = 0.0
            for j in range(1, k + 1):
                s = s + a[j] * out[k - j]
            out[k] = -out[0] * s
        return Jet(out)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int) -> "Jet":
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ContractError("__pow__ takes a nonnegative integer; use pow_real")
        result = Jet.constant(np.ones(self.c.shape[1:]), self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def pow_real(self, r: float) -> "Jet":
        """self**r for real r; requires strictly positive values."""
        a = self.c
        out = np.zeros_like(a)
        out[0] = a[0] ** r
        inv0 = 1.0 / a[0]
        for k in range(1, a.shape[0]):
            s = 0.0
            for j in range(1, k + 1):
                s = s + ((r + 1.0) * j - k) * a[j] * out[k - j]
            out[k] = s * inv0 / k
        return Jet(out)

    def sqrt(self) -> "Jet":
        return self.pow_real(0.5)

    def exp(self) -> "Jet":
        a = self.c
        out = np.zeros_like(a)
        out[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            s = 0.0
            for j in range(1, k + 1):
                s = s + j * a[j] * out[k - j]
            out[k] = s / k
        return Jet(out)

    def log(self) -> "Jet":
        a = self.c
        out = np.zeros_like(a)
        out[0] = np.log(a[0])
        inv0 = 1.0 / a[0]
        for k in range(1, a.shape[0]):
            s = 0.0
            for j in range(1, k):
                s = s + j * out[j] * a[k - j]
            out[k] = (a[k] - s / k) * inv0
        return Jet(out)

    def sinh_cosh(self) -> Tuple["Jet", "Jet"]:
        a = self.c
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0] = np.sinh(a[0])
        c[0] = np.cosh(a[0])
        for k in range(1, a.shape[0]):
            ss = 0.0
            cc = 0.0
            for j in range(1, k + 1):
                ss = ss + j * a[j] * c[k - j]
                cc = cc + j * a[j] * s[k - j]
            s[k] = ss / k
            c[k] = cc / k
        return Jet(s), Jet(c)

    def compose(self, outer_coeffs) -> "Jet":
        """Jet of h(f) given Taylor coefficients of h about f's value.

        ``outer_coeffs[k]`` must be ``h^(k)(f(center))/k!`` broadcastable over
        the centers; evaluation is Horner on the shifted jet.
        """
        outer = [np.asarray(ck, dtype=float) for ck in outer_coeffs]
        shifted = Jet(self.c.copy())
        shifted.c[0] = 0.0
        result = Jet.constant(np.broadcast_to(outer[-1], self.c.shape[1:]).copy(), self.order)
        for ck in reversed(outer[:-1]):
            result = result * shifted + ck
        return result


def _zero_outside(jet: Jet, mask: np.ndarray) -> Jet:
    if np.any(mask):
        jet.c[:, mask] = 0.0
    return jet


# -- series at the origin ----------------------------------------------------


def _xcothx_coeffs(k_max: int = 24) -> np.ndarray:
    """Coefficients e_k of x*coth(x) = 1 + sum_k e_k x^(2k), by series division."""
    cosh = np.array([1.0 / math.factorial(2 * j) for j in range(k_max + 1)])
    sinhc = np.array([1.0 / math.factorial(2 * j + 1) for j in range(k_max + 1)])
    q = np.zeros(k_max + 1)
    for k in range(k_max + 1):
        s = cosh[k]
        for j in range(1, k + 1):
            s -= sinhc[j] * q[k - j]
        q[k] = s
    return q


_XCOTHX = _xcothx_coeffs()  # _XCOTHX[1] = 1/3, _XCOTHX[2] = -1/45, ...


@dataclass(frozen=True)
class PowerSeries:
    """Finite power series sum_j c[j] * rho**(m0 + j) around rho = 0."""

    m0: int
    c: np.ndarray

    def eval(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        # drop exactly-zero leading coefficients so a negative nominal m0
        # (as produced by iterated Laplacians of even series) never forms
        # inf * 0 at tiny radii
        if not np.any(self.c):
            return np.zeros_like(rho)
        lead = 0
        while lead < len(self.c) - 1 and self.c[lead] == 0.0:
            lead += 1
        m0 = self.m0 + lead
        acc = np.zeros_like(rho)
        for cj in self.c[lead:][::-1]:
            acc = acc * rho + cj
        if m0 != 0:
            acc = acc * rho ** float(m0)
        return acc

    def derivative(self) -> "PowerSeries":
        j = self.m0 + np.arange(len(self.c))
        return PowerSeries(self.m0 - 1, self.c * j)

    def scaled(self, a: float) -> "PowerSeries":
        return PowerSeries(self.m0, self.c * a)

    def plus(self, other: "PowerSeries") -> "PowerSeries":
        m0 = min(self.m0, other.m0)
        n = max(self.m0 + len(self.c), other.m0 + len(other.c)) - m0
        c = np.zeros(n)
        c[self.m0 - m0 : self.m0 - m0 + len(self.c)] += self.c
        c[other.m0 - m0 : other.m0 - m0 + len(other.c)] += other.c
        return PowerSeries(m0, c)

    def times(self, other: "PowerSeries", keep: int = 64) -> "PowerSeries":
        c = np.convolve(self.c, other.c)[:keep]
        return PowerSeries(self.m0 + other.m0, c)

    def laplacian(self, n: int, b: float, keep: int = 64, ct_terms: int = 12) -> "PowerSeries":
        """Series of f'' + (n-1)*ct_b(rho)*f', exact term mapping at 0.

        Uses ct_b(rho) = 1/rho * (1 + sum_k e_k (b rho^2)^k); valid well inside
        the coth series' convergence radius, which every near-zero evaluation
        point satisfies by the crossover choice.
        """
        m0_out = self.m0 - 2
        n_out = min(len(self.c) + (2 * ct_terms if b else 0), keep)
        out = np.zeros(n_out)
        for j, cj in enumerate(self.c):
            m = self.m0 + j
            if m != 0:
                lead = cj * m * (m + n - 2)
                if lead != 0.0 and j < n_out:
                    out[j] += lead
                if b and cj != 0.0:
                    bk = 1.0
                    for k in range(1, ct_terms + 1):
                        bk *= b
                        idx = j + 2 * k
                        if idx >= n_out:
                            break
                        out[idx] += cj * (n - 1) * m * _XCOTHX[k] * bk
        return PowerSeries(m0_out, out)


# -- radial functions --------------------------------------------------------


@dataclass(frozen=True)
class RadialFunction:
    """A compactly supported radial profile exposing jet evaluation.

    ``jet_fn(rho, order)`` returns the order-``order`` jet at the given radii;
    the wrapper zeroes it outside ``[support_lo, support]``.  ``series0``,
    when present, is the Taylor series at 0 (valid on ``[0, series0_radius)``)
    used by the near-zero Laplacian route.  ``min_smoothness`` is the largest
    k with a guaranteed continuous k-th derivative (None means C-infinity).

    Critical-case extremizers factor as ``(log(1/rho))**log_power * regular``;
    ``log_regular`` then holds the regular factor and the jet evaluator stays
    valid only for ``rho`` in (0, 1).
    """

    id: str
    support: float
    jet_fn: Callable[[np.ndarray, int], Jet]
    support_lo: float = 0.0
    min_smoothness: Optional[int] = None
    series0: Optional[PowerSeries] = None
    series0_radius: float = 0.0
    breakpoints: Tuple[float, ...] = ()
    log_power: float = 0.0
    log_regular: Optional["RadialFunction"] = None

    def jet(self, rho, order: int) -> Jet:
        rho = np.asarray(rho, dtype=float)
        scalar = rho.shape == ()
        rho = np.atleast_1d(rho)
        if np.any(rho < 0):
            raise DomainError("radial functions are defined for rho >= 0")
        j = self.jet_fn(rho, order)
        j = _zero_outside(j, rho >= self.support)
        if self.support_lo > 0.0:
            j = _zero_outside(j, rho <= self.support_lo)
        if scalar:
            j = Jet(j.c[:, 0])
        return j

    def value(self, rho):
        return self.jet(rho, 0).c[0]

    def with_id(self, new_id: str) -> "RadialFunction":
        return replace(self, id=new_id)


def _check_order(f: RadialFunction, needed: int, what: str) -> None:
    if f.min_smoothness is not None and f.min_smoothness < needed:
        raise ContractError(
            f"{what} needs {needed} continuous derivatives; "
            f"{f.id} guarantees only {f.min_smoothness}"
        )


def radial_derivative(f: RadialFunction, rho) -> float | np.ndarray:
    """d f / d rho at rho > 0."""
    rho_a = np.asarray(rho, dtype=float)
    if np.any(rho_a <= 0):
        raise DomainError("radial_derivative requires rho > 0")
    _check_order(f, 1, "radial_derivative")
    out = f.jet(rho, 1).c[1]
    return out if np.ndim(rho) else float(out)


def _ct_jet(b: float, rho_jet: Jet) -> Jet:
    if b == 0.0:
        return rho_jet.reciprocal()
    x = rho_jet * math.sqrt(b)
    s, c = x.sinh_cosh()
    return (c / s) * math.sqrt(b)


def _lap_values(m: ModelManifold, f: RadialFunction, l: int, rho, want_drho: bool):
    rho = np.asarray(rho, dtype=float)
    scalar = rho.shape == ()
    rho_v = np.atleast_1d(rho).astype(float)
    if np.any(rho_v <= 0):
        raise DomainError("radial Laplacian requires rho > 0")
    out = np.empty_like(rho_v)

    near = np.zeros(rho_v.shape, dtype=bool)
    if f.series0 is not None:
        near = rho_v < min(NEAR_ZERO_CROSSOVER, f.series0_radius)

    if np.any(near):
        ser = f.series0
        for _ in range(l):
            ser = ser.laplacian(m.n, m.b)
        if want_drho:
            ser = ser.derivative()
        out[near] = ser.eval(rho_v[near])

    far = ~near
    if np.any(far):
        r = rho_v[far]
        order = 2 * l + (1 if want_drho else 0)
        g = f.jet(r, order)
        if l > 0:
            ctj = _ct_jet(m.b, Jet.variable(r, max(order - 1, 0)))
            for _ in range(l):
                gd = g.d()
                g = gd.d() + (ctj * gd) * float(m.n - 1)
        if want_drho:
            g = g.d()
        out[far] = g.c[0]

    # support masks were applied inside f.jet for the far branch; enforce for near
    out[rho_v >= f.support] = 0.0
    if f.support_lo > 0.0:
        out[rho_v <= f.support_lo] = 0.0
    return float(out[0]) if scalar else out


def radial_laplacian(m: ModelManifold, f: RadialFunction, rho) -> float | np.ndarray:
    """f''(rho) + (n-1)*ct_b(rho)*f'(rho), the radial Laplacian on the model space."""
    _check_order(f, 2, "radial_laplacian")
    return _lap_values(m, f, 1, rho, want_drho=False)


def radial_laplacian_power(m: ModelManifold, f: RadialFunction, l: int, rho) -> float | np.ndarray:
    """The l-fold iterated radial Laplacian, l in 1..MAX_LAPLACIAN_POWER."""
    if not 1 <= l <= MAX_LAPLACIAN_POWER:
        raise ContractError(f"l must be in 1..{MAX_LAPLACIAN_POWER}, got {l}")
    _check_order(f, 2 * l, f"radial_laplacian_power(l={l})")
    return _lap_values(m, f, l, rho, want_drho=False)


def drho_laplacian_power(m: ModelManifold, f: RadialFunction, l: int, rho) -> float | np.ndarray:
    """d/drho of the l-fold radial Laplacian; l = 0 is the radial derivative."""
    if l == 0:
        return radial_derivative(f, rho)
    if not 1 <= l <= MAX_LAPLACIAN_POWER:
        raise ContractError(f"l must be in 0..{MAX_LAPLACIAN_POWER}, got {l}")
    _check_order(f, 2 * l + 1, f"drho_laplacian_power(l={l})")
    return _lap_values(m, f, l, rho, want_drho=True)
