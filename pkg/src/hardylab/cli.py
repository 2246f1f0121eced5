"""Batch runner and report emitter.

Subcommands: ``constants`` (sharp-constant lookup), ``verify`` (case x grid x
corpus suite), ``identity`` (verify restricted to the identity-bearing
cases), ``sharpness`` (extremizer sweeps), ``mow`` (mode-wise Laplacian
comparison grid).

Reports are deterministic: cells are generated in registry-then-parameter
order, results are collected in submission order regardless of the worker
pool, and floats are serialized in shortest round-trip form.  Exit codes:
0 all pass, 1 any failure, 2 numerical failure or bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import constants as cn
from . import corpus, functionals, harmonics
from .constants import CaseParams, ValidityError
from .functionals import Integrator, REGISTRY, evaluate_case
from .jets import ContractError

CSV_COLUMNS = ("case", "n", "p", "beta", "b", "l", "corpus_id", "lhs", "rhs",
               "constant", "slack", "residual", "quad_error", "status")

DEFAULT_GRID = {
    "n": [3, 4, 5, 8],
    "p": [1.5, 2.0, 3.0],
    "beta": [-1.0, 0.0, 1.0, "half"],
    "b": [0.0, 1.0],
    "l": [1, 2],
}
DEFAULT_CORPUS = ["bump:R=1,m=4", "bump:R=1,m=6", "cutoff:a=0.5,b=1"]

# which grid axes a case actually reads (the rest are collapsed, not swept)
_USES_BETA = {cid for cid in REGISTRY if not cid.startswith("CRIT")}
_USES_L = {"RELLICH_EVEN", "RELLICH_EVEN_QUANT", "RELLICH_ODD", "RELLICH_ODD_QUANT",
           "CRIT_EVEN", "CRIT_EVEN_QUANT", "CRIT_ODD", "CRIT_ODD_QUANT",
           "HYP_HIGH_EVEN", "HYP_HIGH_ODD"}

IDENTITY_CASES = ("HARDY_SUB", "CRIT_HARDY", "ONETWO")

_CONFIG_KEYS = {"schema", "cases", "grid", "corpus", "tolerances", "scales",
                "out", "format", "jobs", "constant_perturbation"}
_GRID_KEYS = {"n", "p", "beta", "b", "l"}
_TOL_KEYS = {"rel", "abs"}


@dataclass
class RunConfig:
    """One reproducible suite run; the JSON form is the reproducibility artifact."""

    cases: List[str] = field(default_factory=lambda: ["all"])
    grid: Dict[str, list] = field(default_factory=lambda: {k: list(v) for k, v in DEFAULT_GRID.items()})
    corpus_ids: List[str] = field(default_factory=lambda: list(DEFAULT_CORPUS))
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    scales: List[float] = field(default_factory=lambda: [1e-1, 1e-3, 1e-6])
    out: Optional[str] = None
    fmt: str = "csv"
    jobs: int = 1
    constant_perturbation: float = 0.0

    @staticmethod
    def from_json(path: str) -> "RunConfig":
        with open(path) as fh:
            raw = json.load(fh)
        if raw.get("schema") != "1":
            raise ValueError(f"config schema must be \"1\", got {raw.get('schema')!r}")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = RunConfig()
        if "cases" in raw:
            cfg.cases = list(raw["cases"])
        if "grid" in raw:
            bad = set(raw["grid"]) - _GRID_KEYS
            if bad:
                raise ValueError(f"unknown grid keys: {sorted(bad)}")
            for key, vals in raw["grid"].items():
                cfg.grid[key] = list(vals)
        if "corpus" in raw:
            cfg.corpus_ids = list(raw["corpus"])
        if "tolerances" in raw:
            bad = set(raw["tolerances"]) - _TOL_KEYS
            if bad:
                raise ValueError(f"unknown tolerance keys: {sorted(bad)}")
            cfg.rel_tol = float(raw["tolerances"].get("rel", cfg.rel_tol))
            cfg.abs_tol = float(raw["tolerances"].get("abs", cfg.abs_tol))
        if "scales" in raw:
            cfg.scales = [float(x) for x in raw["scales"]]
        if "out" in raw:
            cfg.out = raw["out"]
        if "format" in raw:
            cfg.fmt = raw["format"]
        if "jobs" in raw:
            cfg.jobs = int(raw["jobs"])
        if "constant_perturbation" in raw:
            cfg.constant_perturbation = float(raw["constant_perturbation"])
        if cfg.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {cfg.fmt!r}")
        return cfg

    def resolve_cases(self) -> List[str]:
        if self.cases == ["all"] or self.cases == "all":
            return list(REGISTRY)
        unknown = [c for c in self.cases if c not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown case ids: {unknown}")
        return list(self.cases)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


def _resolve_beta(spec, n: int, p: float) -> float:
    if spec == "half":
        return (n - p) / 2.0
    return float(spec)


def _cells(cfg: RunConfig):
    """Deterministic cell list: registry order, then n, p, beta, b, l, corpus."""
    cases = cfg.resolve_cases()
    for cid in cases:
        beta_axis = cfg.grid["beta"] if cid in _USES_BETA else [None]
        l_axis = cfg.grid["l"] if cid in _USES_L else [1]
        for n in cfg.grid["n"]:
            for p in cfg.grid["p"]:
                for beta_spec in beta_axis:
                    for b in cfg.grid["b"]:
                        for l in l_axis:
                            for corpus_id in cfg.corpus_ids:
                                if beta_spec is None:
                                    beta = n - p  # critical cases live at the endpoint
                                else:
                                    beta = _resolve_beta(beta_spec, int(n), float(p))
                                yield (cid, CaseParams(n=int(n), p=float(p),
                                                       beta=float(beta), b=float(b),
                                                       l=int(l)), corpus_id)


def _run_cell(cell, itg: Integrator, perturbation: float) -> dict:
    cid, prm, corpus_id = cell
    row = dict(case=cid, n=prm.n, p=prm.p, beta=prm.beta, b=prm.b, l=prm.l,
               corpus_id=corpus_id, lhs=None, rhs=None, constant=None,
               slack=None, residual=None, quad_error=None, status="")
    check = cn.validity(cid, prm)
    if not check.ok:
        row["status"] = f"skipped: {check.reason}"
        return row
    try:
        f = corpus.from_id(corpus_id, prm)
        rep = evaluate_case(cid, prm, f, integrator=itg,
                            constant_perturbation=perturbation)
    except ValidityError as exc:
        row["status"] = f"skipped: {exc}"
        return row
    except ContractError as exc:
        row["status"] = f"skipped: {exc}"
        return row
    row.update(lhs=rep.lhs, rhs=rep.rhs, constant=rep.constant, slack=rep.slack,
               residual=rep.identity_residual, quad_error=rep.quad_error_budget,
               status=rep.status)
    return row


def _write_rows(rows: List[dict], out: Optional[str], fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=1, default=_fmt)
        if out in (None, "-"):
            sys.stdout.write(text + "\n")
        else:
            with open(out, "w") as fh:
                fh.write(text + "\n")
        return
    target = sys.stdout if out in (None, "-") else open(out, "w", newline="")
    try:
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c if c != "corpus_id" else "corpus_id"])
                             for c in CSV_COLUMNS])
    finally:
        if target is not sys.stdout:
            target.close()


def _exit_code(rows: Sequence[dict]) -> int:
    statuses = [r["status"] for r in rows]
    if any(s.startswith("numerical-failure") for s in statuses):
        return 2
    if any(s == "fail" for s in statuses):
        return 1
    return 0


def _default_jobs() -> int:
    env = os.environ.get("HARDYLAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def run_suite(cfg: RunConfig) -> List[dict]:
    itg = Integrator(cfg.rel_tol, cfg.abs_tol)
    cells = list(_cells(cfg))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(
                lambda cell: _run_cell(cell, itg, cfg.constant_perturbation), cells))
    else:
        rows = [_run_cell(cell, itg, cfg.constant_perturbation) for cell in cells]
    return rows


# -- subcommands -----------------------------------------------------------------


def _cfg_from_args(args) -> RunConfig:
    if args.config:
        cfg = RunConfig.from_json(args.config)
    else:
        cfg = RunConfig()
    if args.cases:
        cfg.cases = args.cases.split(",")
    for axis in ("n", "p", "beta", "b", "l"):
        val = getattr(args, f"grid_{axis}", None)
        if val:
            parsed = []
            for tok in val.split(","):
                if axis == "beta" and tok == "half":
                    parsed.append("half")
                elif axis in ("n", "l"):
                    parsed.append(int(tok))
                else:
                    parsed.append(float(tok))
            cfg.grid[axis] = parsed
    if args.corpus:
        cfg.corpus_ids = args.corpus.split(";")
    if args.out is not None:
        cfg.out = args.out
    if args.format:
        cfg.fmt = args.format
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if getattr(args, "perturb_constant", None):
        cfg.constant_perturbation = args.perturb_constant
    return cfg


def cmd_verify(args) -> int:
    try:
        cfg = _cfg_from_args(args)
        if args.command == "identity":
            cfg.cases = list(IDENTITY_CASES)
        rows = run_suite(cfg)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_rows(rows, cfg.out, cfg.fmt)
    npass = sum(r["status"] == "pass" for r in rows)
    nskip = sum(r["status"].startswith("skipped") for r in rows)
    nfail = len(rows) - npass - nskip
    print(f"{npass} pass, {nfail} fail, {nskip} skipped "
          f"({len(rows)} cells)", file=sys.stderr)
    return _exit_code(rows)


_CONSTANT_TABLE = {
    # name -> (callable(args) -> value, beta-interval text, source case id)
    "hardy": (lambda a: cn.hardy_constant(a.n, a.p, a.beta),
              lambda a: f"beta < {a.n - a.p:g}", "HARDY_SUB"),
    "critical_hardy": (lambda a: cn.critical_hardy_constant(a.p),
                       lambda a: "beta = n-p (critical)", "CRIT_HARDY"),
    "onetwo": (lambda a: cn.onetwo_constant(a.n, a.p, a.beta),
               lambda a: f"{-a.n * (a.p - 1):g} < beta < {a.n - a.p:g}", "ONETWO"),
    "rellich2": (lambda a: cn.rellich2_constant(a.n, a.p, a.beta),
                 lambda a: f"{-a.n * (a.p - 1):g} < beta < {a.n - 2 * a.p:g}",
                 "RELLICH_2"),
    "c_even": (lambda a: cn.c_even(a.n, a.l, a.beta, a.p),
               lambda a: f"{-a.n * (a.p - 1):g} < beta < {a.n - 2 * a.l * a.p:g}",
               "RELLICH_EVEN"),
    "c_odd": (lambda a: cn.c_odd(a.n, a.l, a.beta, a.p),
              lambda a: f"{a.n - (a.n + 1) * a.p:g} < beta < "
                        f"{a.n - (2 * a.l + 1) * a.p:g}", "RELLICH_ODD"),
    "critical_rellich2": (lambda a: cn.critical_rellich2_constant(a.n, a.p),
                          lambda a: "beta = n-2p (critical)", "CRIT_RELLICH_2"),
    "critical_even": (lambda a: cn.critical_even_constant(a.n, a.l, a.p),
                      lambda a: "beta = n-2lp (critical)", "CRIT_EVEN"),
    "critical_odd": (lambda a: cn.critical_odd_constant(a.n, a.l, a.p),
                     lambda a: "beta = n-(2l+1)p (critical)", "CRIT_ODD"),
    "ko": (lambda a: cn.ko_constant(a.n, a.beta),
           lambda a: f"-2 < beta < {a.n - 4:g}", "KO_RELLICH"),
}


def cmd_constants(args) -> int:
    entry = _CONSTANT_TABLE.get(args.case)
    if entry is None:
        print(f"error: unknown constant case {args.case!r}; "
              f"choose from {sorted(_CONSTANT_TABLE)}", file=sys.stderr)
        return 2
    fn, interval, source = entry
    try:
        value = fn(args)
    except ValidityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"case={args.case} source={source}")
    print(f"constant={_fmt(float(value))}")
    print(f"beta_validity: {interval(args)}")
    return 0


def cmd_sharpness(args) -> int:
    prm = CaseParams(n=args.n, p=args.p, beta=args.beta, b=args.b)
    try:
        family = corpus.ExtremizerFamily(args.family, prm)
        scales = [float(s) for s in args.scales.split(",")]
        rows = functionals.sharpness_sweep(family, scales)
    except (ValidityError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("scale,quotient,gap")
    for row in rows:
        print(f"{_fmt(row.scale)},{_fmt(row.quotient)},{_fmt(row.gap)}")
    ok = all(r.gap > 0 for r in rows)
    for a, bnext in zip(rows, rows[1:]):
        if not (bnext.gap < a.gap + 2.0 * (a.quad_error + bnext.quad_error)):
            ok = False
    print(f"sharp_constant={_fmt(family.sharp_constant())} "
          f"trend={'ok' if ok else 'violated'}", file=sys.stderr)
    return 0 if ok else 1


def cmd_mow(args) -> int:
    itg = Integrator()
    rows = []
    ok = True
    ns = [int(x) for x in args.n.split(",")]
    betas = [float(x) for x in args.beta.split(",")]
    rho_grid = np.linspace(1e-3, 30.0, args.grid_points)
    for n in ns:
        for beta in betas:
            if not (-2 < beta <= n - 4):
                rows.append(dict(n=n, beta=beta, check="range",
                                 value=None, status="skipped: -2 < beta <= n-4"))
                continue
            note = " (boundary)" if beta == n - 4 else ""
            for k in range(1, args.k_max + 1):
                for m in (2, 3):
                    spec = harmonics.mode_profile(n, k, m=m)
                    val = harmonics.mode_form(n, beta, k, spec.profile, integrator=itg)
                    good = val >= -1e-9
                    ok &= good
                    rows.append(dict(n=n, beta=beta, check=f"mode_form k={k} m={m}{note}",
                                     value=val, status="pass" if good else "fail"))
            lhs, rhs, slack = harmonics.mow_compare(
                n, beta, [harmonics.mode_profile(n, 0)], integrator=itg)
            good = abs(slack) <= 1e-9
            ok &= good
            rows.append(dict(n=n, beta=beta, check="radial_equality", value=slack,
                             status="pass" if good else "fail"))
            coef = harmonics.coefficient_check(n, beta, 1, args.l_max)
            good = all(r.ok for r in coef)
            ok &= good
            rows.append(dict(n=n, beta=beta, check=f"coefficients l<={args.l_max}",
                             value=min(r.series_coefficient for r in coef),
                             status="pass" if good else "fail"))
            pmin = harmonics.pointwise_positivity(n, beta, rho_grid)
            good = pmin > 0
            ok &= good
            rows.append(dict(n=n, beta=beta, check="pointwise_min", value=pmin,
                             status="pass" if good else "fail"))
    for row in rows:
        print(f"n={row['n']} beta={row['beta']:g} {row['check']}: "
              f"{_fmt(row['value'])} [{row['status']}]")
    return 0 if ok else 1


def _add_grid_flags(sub):
    sub.add_argument("--config", default=None, help="JSON run config (schema 1)")
    sub.add_argument("--cases", default=None, help="comma list of case ids or 'all'")
    sub.add_argument("--grid-n", dest="grid_n", default=None)
    sub.add_argument("--grid-p", dest="grid_p", default=None)
    sub.add_argument("--grid-beta", dest="grid_beta", default=None)
    sub.add_argument("--grid-b", dest="grid_b", default=None)
    sub.add_argument("--grid-l", dest="grid_l", default=None)
    sub.add_argument("--corpus", default=None,
                     help="semicolon-separated corpus ids (ids contain commas)")
    sub.add_argument("--out", default=None, help="report path ('-' for stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--jobs", type=int, default=_default_jobs())
    sub.add_argument("--perturb-constant", type=float, default=0.0,
                     help="test fixture: multiply case constants by (1+eps)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardylab",
                                 description="Numerical verification suite for sharp "
                                             "radial Hardy/Rellich inequalities")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="sharp-constant lookup")
    c.add_argument("--case", required=True)
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--beta", type=float, default=0.0)
    c.add_argument("--l", type=int, default=1)
    c.set_defaults(func=cmd_constants)

    for name, help_text in (("verify", "run the verification suite"),
                            ("identity", "verify the identity-bearing cases")):
        v = sub.add_parser(name, help=help_text)
        _add_grid_flags(v)
        v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sharpness", help="extremizer-sequence sweep")
    s.add_argument("--family", required=True,
                   choices=("hardy", "critical", "onetwo", "rellich2"))
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--b", type=float, default=0.0)
    s.add_argument("--scales", default="1e-1,1e-3,1e-6")
    s.set_defaults(func=cmd_sharpness)

    w = sub.add_parser("mow", help="mode-wise Laplacian comparison checks")
    w.add_argument("--n", default="5")
    w.add_argument("--beta", default="0")
    w.add_argument("--k-max", dest="k_max", type=int, default=3)
    w.add_argument("--l-max", dest="l_max", type=int, default=100)
    w.add_argument("--grid-points", dest="grid_points", type=int, default=2000)
    w.set_defaults(func=cmd_mow)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
