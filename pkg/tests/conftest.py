"""Shared fixtures: corpus members, integrators, and independent oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

from hardylab import corpus
from hardylab.functionals import Integrator
from hardylab.quadrature import (critical_log_transform, critical_rho_from_v,
                                 oracle_integrate)

ORACLE_REL_TOL = 1e-9


def _dip_points(h, a: float, b: float, n: int = 2049):
    """Locate interior structure of a nonnegative integrand: boundaries of
    zero plateaus and isolated near-zero dips (algebraic |.|^p kinks at
    interior zeros).  Deterministic scan plus golden-section refinement; the
    points become split locations for the piecewise graded oracle."""
    x = np.linspace(a, b, n + 2)[1:-1]
    v = np.abs(np.asarray(h(x), dtype=float))
    vmax = float(v.max()) if v.size else 0.0
    if vmax <= 0.0:
        return []
    pts = []
    active = v > 1e-12 * vmax
    for i in range(len(x) - 1):
        if active[i] != active[i + 1]:
            pts.append(0.5 * (x[i] + x[i + 1]))
    inv = 0.5 * (3.0 - math.sqrt(5.0))

    def habs(point):
        return abs(float(np.asarray(h(np.array([point])))[0]))

    for i in range(1, len(x) - 1):
        if v[i] < v[i - 1] and v[i] <= v[i + 1] and 0 < v[i] < 1e-2 * vmax:
            lo, hi = x[i - 1], x[i + 1]
            for _ in range(90):
                m1 = lo + inv * (hi - lo)
                m2 = hi - inv * (hi - lo)
                if habs(m1) <= habs(m2):
                    hi = m2
                else:
                    lo = m1
            pts.append(0.5 * (lo + hi))
    return pts


def oracle_structured(h, a: float, b: float, known=(), detect=True) -> float:
    """Graded-mesh oracle applied piecewise between structure points.

    ``known`` carries declared junctions (corpus breakpoints mapped to the
    integration variable); ``detect`` additionally scans for interior
    near-zero dips (|.|^p kinks at zeros the corpus cannot declare)."""
    pts = list(known)
    if detect:
        pts += _dip_points(h, a, b)
    keep = []
    for p in sorted(pts):
        if a < p < b and (not keep or p - keep[-1] > 1e-10 * (b - a)):
            keep.append(p)
    edges = [a] + keep[:64] + [b]
    total = 0.0
    for x0, x1 in zip(edges, edges[1:]):
        if x1 - x0 > 1e-13 * (b - a):
            total += oracle_integrate(h, x0, x1)
    return total


class CrossCheckingIntegrator(Integrator):
    """Every distinct integral is re-done with the fixed graded-mesh oracle.

    Power-type weights are cross-checked on the raw weighted integrand (a
    fully independent path); critical-log integrals share the exact analytic
    substitution and differ only in the integration algorithm, which is why
    the closed-form anchor test exists alongside.  A blind single-pass oracle
    comparison is tried first; when the integrand carries interior kinks the
    structure-aware piecewise oracle is used instead.
    """

    def __init__(self, rel_tol: float = 1e-10, abs_tol: float = 1e-13,
                 check_tol: float = ORACLE_REL_TOL):
        super().__init__(rel_tol, abs_tol)
        self.check_tol = check_tol
        self.checked = 0
        self.max_rel_dev = 0.0

    def _record(self, value: float, first: float, retry, what: str) -> None:
        scale = max(abs(value), abs(first), 1e-12)
        rel = abs(value - first) / scale
        if rel > self.check_tol:
            structured = retry()
            scale = max(abs(value), abs(structured), 1e-12)
            rel = abs(value - structured) / scale
        self.checked += 1
        self.max_rel_dev = max(self.max_rel_dev, rel)
        assert rel <= self.check_tol, (
            f"{what}: adaptive {value!r} disagrees with the oracle "
            f"(rel dev {rel:.3e})")

    def _verify(self, value, h, a, b, known, what):
        self._record(value, oracle_structured(h, a, b, known, detect=False),
                     lambda: oracle_structured(h, a, b, known, detect=True), what)

    def plain(self, g, a, b, bps=(), key=None):
        fresh = key is None or key not in self._cache
        out = super().plain(g, a, b, bps, key)
        if fresh:
            self._verify(out[0], g, a, b, bps, "plain")
        return out

    def power(self, g, alpha, R, bps=(), key=None):
        fresh = key is None or key not in self._cache
        out = super().power(g, alpha, R, bps, key)
        if fresh:
            self._verify(out[0], lambda r: g(r) * r ** alpha, 0.0, R, bps,
                         f"power(alpha={alpha})")
        return out

    def loggrid(self, h, lo, hi, bps=(), key=None):
        fresh = key is None or key not in self._cache
        out = super().loggrid(h, lo, hi, bps, key)
        if fresh:
            # compare in log coordinates, where the multi-scale structure is flat
            def hu(u):
                r = np.exp(u)
                return h(r) * r

            known = [math.log(x) for x in bps if lo < x < hi]
            self._verify(out[0], hu, math.log(lo), math.log(hi), known, "loggrid")
        return out

    def critical(self, g, q, R, bps=(), key=None):
        fresh = key is None or key not in self._cache
        out = super().critical(g, q, R, bps, key)
        if fresh:
            def gv(v):
                return g(np.maximum(critical_rho_from_v(q, v), 1e-308))

            def raw(r):
                r = np.minimum(r, np.nextafter(1.0, 0.0))
                t = -np.log(r)
                return g(r) / (r * t ** q)

            mid = 0.5 if R >= 0.75 else R
            v_mid = float(critical_log_transform(q, np.asarray(mid)))
            v_known = [float(critical_log_transform(q, np.asarray(x)))
                       for x in bps if 0 < x < mid]
            r_known = [x for x in bps if mid < x < R]

            def run(detect):
                total = oracle_structured(gv, 0.0, v_mid, v_known, detect)
                if R >= 0.75:
                    total += oracle_structured(raw, mid, R, r_known, detect)
                return total

            self._record(out[0], run(False), lambda: run(True),
                         f"critical(q={q})")
        return out


def richardson_derivative(fn, x: float, order: int, h0: float = 1e-2) -> float:
    """Richardson-extrapolated central difference of the given order."""

    def diff(h):
        if order == 1:
            return (fn(x + h) - fn(x - h)) / (2 * h)
        if order == 2:
            return (fn(x + h) - 2 * fn(x) + fn(x - h)) / h ** 2
        if order == 3:
            return (fn(x + 2 * h) - 2 * fn(x + h) + 2 * fn(x - h)
                    - fn(x - 2 * h)) / (2 * h ** 3)
        if order == 4:
            return (fn(x + 2 * h) - 4 * fn(x + h) + 6 * fn(x)
                    - 4 * fn(x - h) + fn(x - 2 * h)) / h ** 4
        raise ValueError(order)

    # three-level Richardson with step halving (h^2 error model)
    d1, d2, d3 = diff(h0), diff(h0 / 2), diff(h0 / 4)
    e1 = (4 * d2 - d1) / 3
    e2 = (4 * d3 - d2) / 3
    return (16 * e2 - e1) / 15


@pytest.fixture(scope="session")
def itg():
    return Integrator()


@pytest.fixture(scope="session")
def xitg():
    """Session-wide cross-checking integrator shared by the acceptance tests."""
    return CrossCheckingIntegrator()


@pytest.fixture(scope="session")
def bump4():
    return corpus.polynomial_bump(1.0, 4)


@pytest.fixture(scope="session")
def bump6():
    return corpus.polynomial_bump(1.0, 6)


@pytest.fixture(scope="session")
def cutoff_half():
    return corpus.smooth_cutoff(0.5, 1.0)


@pytest.fixture(scope="session")
def acceptance_corpus(bump4, bump6, cutoff_half):
    return (bump4, bump6, cutoff_half)
