"""Sharp constants and parameter-validity predicates for every inequality family.

Each constant is the exact closed form; validity checks mirror the stated
parameter ranges and report the first violated bound.  For the odd-order
Rellich family two printed ranges for beta disagree slightly; the
implementation enforces their intersection (the tighter lower bound
``n - (n+1)p``), which is also what the iterated-constant construction needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CaseParams",
    "ValidityError",
    "ValidityResult",
    "hardy_constant",
    "critical_hardy_constant",
    "onetwo_constant",
    "rellich2_constant",
    "c_even",
    "c_odd",
    "critical_rellich2_constant",
    "critical_even_constant",
    "critical_odd_constant",
    "ko_constant",
    "validity",
    "VALIDITY_FAMILIES",
]


class ValidityError(ValueError):
    """Parameters outside the validity range of an inequality family."""


@dataclass(frozen=True)
class CaseParams:
    """Parameters (n, p, beta, b, l) selecting one cell of an inequality family."""

    n: int
    p: float
    beta: float = 0.0
    b: float = 0.0
    l: int = 1


@dataclass(frozen=True)
class ValidityResult:
    ok: bool
    reason: str = ""


def _req(cond: bool, reason: str) -> None:
    if not cond:
        raise ValidityError(reason)


def _base(n: int, p: float) -> None:
    _req(n >= 2, f"n >= 2 required, got n={n}")
    _req(p > 1, f"p > 1 required, got p={p}")


def hardy_constant(n: int, p: float, beta: float) -> float:
    """(p/(n-p-beta))**p, the sharp subcritical weighted Hardy constant."""
    _base(n, p)
    _req(p < n, f"p < n required, got p={p}, n={n}")
    _req(beta < n - p, f"beta < n-p violated (beta={beta}, n-p={n - p})")
    return (p / (n - p - beta)) ** p


def critical_hardy_constant(p: float) -> float:
    """((p-1)/p)**p, the sharp critical Hardy constant (multiplies the LHS)."""
    _req(p > 1, f"p > 1 required, got p={p}")
    return ((p - 1.0) / p) ** p


def onetwo_constant(n: int, p: float, beta: float) -> float:
    """(p/(n(p-1)+beta))**p, sharp for the first-to-zeroth order inequality."""
    _base(n, p)
    _req(p < n, f"p < n required, got p={p}, n={n}")
    _req(beta > -n * (p - 1), f"beta > -n(p-1) violated (beta={beta}, bound={-n * (p - 1)})")
    _req(beta < n - p, f"beta < n-p violated (beta={beta}, n-p={n - p})")
    return (p / (n * (p - 1) + beta)) ** p


def rellich2_constant(n: int, p: float, beta: float) -> float:
    """((n(p-1)+beta)(n-2p-beta)/p^2)**p, the sharp second-order constant."""
    _req(n >= 3, f"n >= 3 required, got n={n}")
    _req(1 < p < n / 2, f"1 < p < n/2 required, got p={p}, n/2={n / 2}")
    _req(beta > -n * (p - 1), f"beta > -n(p-1) violated (beta={beta}, bound={-n * (p - 1)})")
    _req(beta < n - 2 * p, f"beta < n-2p violated (beta={beta}, n-2p={n - 2 * p})")
    return ((n * (p - 1) + beta) * (n - 2 * p - beta) / p ** 2) ** p


def c_even(n: int, l: int, beta: float, p: float) -> float:
    """prod_{i<l} [p^2 / ((n-2p-beta-2ip)(n(p-1)+beta+2ip))] ** p.

    Valid for l >= 1, 1 < p < n/(2l), -n(p-1) < beta < n-2lp; computed in
    log space for l >= 3 to avoid underflow of the fast-decaying product.
    """
    _req(l >= 1, f"l >= 1 required, got l={l}")
    _req(1 < p < n / (2 * l), f"1 < p < n/(2l) required, got p={p}, n/(2l)={n / (2 * l)}")
    _req(beta > -n * (p - 1), f"beta > -n(p-1) violated (beta={beta}, bound={-n * (p - 1)})")
    _req(beta < n - 2 * l * p, f"beta < n-2lp violated (beta={beta}, n-2lp={n - 2 * l * p})")
    factors = []
    for i in range(l):
        d1 = n - 2 * p - beta - 2 * i * p
        d2 = n * (p - 1) + beta + 2 * i * p
        _req(d1 > 0 and d2 > 0, f"degenerate factor at i={i} (boundary case)")
        factors.append(p * p / (d1 * d2))
    if l >= 3:
        return math.exp(p * sum(math.log(x) for x in factors))
    return math.prod(factors) ** p


def c_odd(n: int, l: int, beta: float, p: float) -> float:
    """p^p/(n-p-beta)^p * c_even(n, l, p+beta, p), for odd order 2l+1."""
    _req(l >= 1, f"l >= 1 required, got l={l}")
    _req(1 < p < n / (2 * l + 1),
         f"1 < p < n/(2l+1) required, got p={p}, n/(2l+1)={n / (2 * l + 1)}")
    lo = n - (n + 1) * p
    hi = n - (2 * l + 1) * p
    _req(beta > lo, f"beta > n-(n+1)p violated (beta={beta}, bound={lo}; "
                    "tighter of the two stated lower bounds)")
    _req(beta < hi, f"beta < n-(2l+1)p violated (beta={beta}, bound={hi})")
    return (p / (n - p - beta)) ** p * c_even(n, l, p + beta, p)


def critical_rellich2_constant(n: int, p: float) -> float:
    """(p/((p-1)(n-2)))**p, the sharp critical second-order constant."""
    _req(n >= 3, f"n >= 3 required, got n={n}")
    _req(p > 1, f"p > 1 required, got p={p}")
    return (p / ((p - 1) * (n - 2))) ** p


def _crit_product(n: int, l: int) -> float:
    prod = 1.0
    for i in range(l):
        d = n - 2 * i - 2
        _req(d > 0, f"n-2i-2 > 0 violated at i={i} (n={n})")
        prod *= 1.0 / d
    return prod


def critical_even_constant(n: int, l: int, p: float) -> float:
    """(p' * 2^(1-l)/(l-1)! * prod_{i<l} 1/(n-2i-2)) ** p, p' = p/(p-1).

    The closed form only needs p > 1 and positive product factors (so the
    l = 1 value agrees with critical_rellich2_constant on its whole range);
    the inequality case itself is gated at p < n/(2l).
    """
    _req(n >= 3, f"n >= 3 required, got n={n}")
    _req(l >= 1, f"l >= 1 required, got l={l}")
    _req(p > 1, f"p > 1 required, got p={p}")
    pp = p / (p - 1)
    return (pp * 2.0 ** (1 - l) / math.factorial(l - 1) * _crit_product(n, l)) ** p


def critical_odd_constant(n: int, l: int, p: float) -> float:
    """(p' / (2^l l!) * prod_{i<l} 1/(n-2i-2)) ** p, p' = p/(p-1)."""
    _req(n >= 3, f"n >= 3 required, got n={n}")
    _req(l >= 1, f"l >= 1 required, got l={l}")
    _req(p > 1, f"p > 1 required, got p={p}")
    pp = p / (p - 1)
    return (pp / (2.0 ** l * math.factorial(l)) * _crit_product(n, l)) ** p


def ko_constant(n: int, beta: float) -> float:
    """(n+beta)^2 (n-4-beta)^2 / 16, the classical p=2 Rellich constant."""
    _req(n >= 3, f"n >= 3 required, got n={n}")
    _req(-2 < beta, f"-2 < beta required (beta={beta})")
    _req(beta < n - 4, f"beta < n-4 required (beta={beta}, n-4={n - 4})")
    return (n + beta) ** 2 * (n - 4 - beta) ** 2 / 16.0


# -- validity dispatch ---------------------------------------------------------


def _check_hardy(c: CaseParams):
    hardy_constant(c.n, c.p, c.beta)


def _check_critical_hardy(c: CaseParams):
    _req(c.n >= 2, f"n >= 2 required, got n={c.n}")
    _req(c.p > 1, f"p > 1 required, got p={c.p}")


def _check_critical_n(c: CaseParams):
    _check_critical_hardy(c)
    _req(abs(c.p - c.n) < 1e-12, f"p = n required (p={c.p}, n={c.n})")


def _check_onetwo(c: CaseParams):
    onetwo_constant(c.n, c.p, c.beta)


def _check_rellich2(c: CaseParams):
    rellich2_constant(c.n, c.p, c.beta)


def _check_critical_rellich2(c: CaseParams):
    critical_rellich2_constant(c.n, c.p)
    _req(c.p < c.n, f"p < n required, got p={c.p}, n={c.n}")


def _check_even(c: CaseParams):
    _req(c.n >= 3, f"n >= 3 required, got n={c.n}")
    c_even(c.n, c.l, c.beta, c.p)


def _check_odd(c: CaseParams):
    _req(c.n >= 3, f"n >= 3 required, got n={c.n}")
    c_odd(c.n, c.l, c.beta, c.p)


def _check_critical_even(c: CaseParams):
    _req(1 < c.p < c.n / (2 * c.l),
         f"1 < p < n/(2l) required, got p={c.p}, n/(2l)={c.n / (2 * c.l)}")
    critical_even_constant(c.n, c.l, c.p)


def _check_critical_odd(c: CaseParams):
    _req(1 < c.p < c.n / (2 * c.l + 1),
         f"1 < p < n/(2l+1) required, got p={c.p}, n/(2l+1)={c.n / (2 * c.l + 1)}")
    critical_odd_constant(c.n, c.l, c.p)


def _req_hyperbolic(c: CaseParams):
    _req(abs(c.b - 1.0) < 1e-12, f"hyperbolic case requires b = 1, got b={c.b}")


def _check_hyp_hardy(c: CaseParams):
    _req_hyperbolic(c)
    hardy_constant(c.n, c.p, c.beta)


def _check_hyp_critical(c: CaseParams):
    _req_hyperbolic(c)
    _check_critical_hardy(c)


def _check_ko(c: CaseParams):
    _req_hyperbolic(c)
    _req(abs(c.p - 2.0) < 1e-12, f"p = 2 required, got p={c.p}")
    ko_constant(c.n, c.beta)


def _check_improved_r(c: CaseParams):
    _check_ko(c)
    _req(c.n >= 4, f"n >= 4 required, got n={c.n}")


def _check_hyp_high_even(c: CaseParams):
    _req_hyperbolic(c)
    _req(abs(c.p - 2.0) < 1e-12, f"p = 2 required, got p={c.p}")
    _req(c.l >= 1, f"l >= 1 required, got l={c.l}")
    _req(c.n > 4 * c.l, f"n > 4l required (n={c.n}, 4l={4 * c.l})")
    _req(-2 < c.beta, f"-2 < beta required (beta={c.beta})")
    _req(c.beta < c.n - 4 * c.l, f"beta < n-4l required (beta={c.beta})")
    c_even(c.n, c.l, c.beta, 2.0)


def _check_hyp_high_odd(c: CaseParams):
    _req_hyperbolic(c)
    _req(abs(c.p - 2.0) < 1e-12, f"p = 2 required, got p={c.p}")
    _req(c.l >= 1, f"l >= 1 required, got l={c.l}")
    k2 = 2 * (2 * c.l + 1)
    _req(c.n > k2, f"n > 2(2l+1) required (n={c.n})")
    _req(-2 < c.beta, f"-2 < beta required (beta={c.beta})")
    _req(c.beta < c.n - k2, f"beta < n-2(2l+1) required (beta={c.beta})")
    c_odd(c.n, c.l, c.beta, 2.0)


def _check_mow(c: CaseParams):
    _req(c.n >= 3, f"n >= 3 required, got n={c.n}")
    _req(-2 < c.beta, f"-2 < beta required (beta={c.beta})")
    _req(c.beta <= c.n - 4, f"beta <= n-4 required (beta={c.beta}, n-4={c.n - 4})")


VALIDITY_FAMILIES = {
    "hardy": _check_hardy,
    "critical_hardy": _check_critical_hardy,
    "critical_n": _check_critical_n,
    "onetwo": _check_onetwo,
    "rellich12": _check_onetwo,
    "rellich2": _check_rellich2,
    "critical_rellich2": _check_critical_rellich2,
    "even": _check_even,
    "odd": _check_odd,
    "critical_even": _check_critical_even,
    "critical_odd": _check_critical_odd,
    "hyp_hardy": _check_hyp_hardy,
    "hyp_critical": _check_hyp_critical,
    "ko": _check_ko,
    "aq": _check_ko,
    "improved_r": _check_improved_r,
    "hyp_high_even": _check_hyp_high_even,
    "hyp_high_odd": _check_hyp_high_odd,
    "mow": _check_mow,
}

# registry ids from the functionals module map onto validity families
_CASE_TO_FAMILY = {
    "HARDY_SUB": "hardy",
    "HARDY_QUANT_D": "hardy",
    "HARDY_QUANT_PI": "hardy",
    "CRIT_HARDY": "critical_hardy",
    "CRIT_QUANT_D": "critical_hardy",
    "CRIT_QUANT_PI": "critical_hardy",
    "CRIT_N": "critical_n",
    "ONETWO": "onetwo",
    "ONETWO_QUANT": "onetwo",
    "RELLICH_12": "rellich12",
    "RELLICH_12_QUANT": "rellich12",
    "RELLICH_2": "rellich2",
    "RELLICH_2_QUANT": "rellich2",
    "CRIT_RELLICH_2": "critical_rellich2",
    "CRIT_RELLICH_2_QUANT": "critical_rellich2",
    "RELLICH_EVEN": "even",
    "RELLICH_EVEN_QUANT": "even",
    "RELLICH_ODD": "odd",
    "RELLICH_ODD_QUANT": "odd",
    "CRIT_EVEN": "critical_even",
    "CRIT_EVEN_QUANT": "critical_even",
    "CRIT_ODD": "critical_odd",
    "CRIT_ODD_QUANT": "critical_odd",
    "HYP_HARDY": "hyp_hardy",
    "HYP_CRIT": "hyp_critical",
    "KO_RELLICH": "ko",
    "HYP_IMPROVE": "ko",
    "AQ": "aq",
    "HYP_IMPROVE_SAO": "ko",
    "HYP_IMPROVED_R": "improved_r",
    "HYP_HIGH_EVEN": "hyp_high_even",
    "HYP_HIGH_ODD": "hyp_high_odd",
}


def validity(case_id: str, params: CaseParams) -> ValidityResult:
    """Check the stated parameter range for the named inequality family.

    Accepts both registry case ids (HARDY_SUB, ...) and family names
    (hardy, rellich2, mow, ...); returns the first violated bound.
    """
    key = case_id.strip()
    fam = _CASE_TO_FAMILY.get(key.upper())
    if fam is None:
        fam = key.lower()
    check = VALIDITY_FAMILIES.get(fam)
    if check is None:
        raise KeyError(f"unknown inequality case id {case_id!r}")
    try:
        check(params)
    except ValidityError as exc:
        return ValidityResult(False, str(exc))
    return ValidityResult(True, "")
