"""Command line front end: ``padiclf compute|symbols|check|import|psi``.

Exit codes: 0 success, 1 a requested check failed, 2 configuration error,
3 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lseries, measure, modsym, numoracle
from .padics import PadicNumber, valuation

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_PRECISION = 0, 1, 2, 3
CHECKS = ("additivity", "interpolation", "fe", "decay", "modp", "psi")
CACHE_ENV = "PADICLF_CACHE_DIR"
ORACLE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    p: int
    curve: numoracle.CurveData | None = None
    level: int | None = None
    eigenvalues: dict[int, int] = field(default_factory=dict)
    table_file: str | None = None
    levels: int = lseries.DEFAULT_LEVEL
    terms: int = lseries.DEFAULT_TERMS
    coeffs: int = lseries.DEFAULT_COEFFS
    centers: list = field(default_factory=lambda: [1])
    checks: list[str] = field(default_factory=list)
    cache_dir: str | None = None
    root: str | None = None
    fmt: str = "text"
    export_series: str | None = None
    export_measure: str | None = None

    def validate(self) -> None:
        if not modsym._is_prime(self.p) or self.p == 2:
            raise ConfigError(f"p = {self.p} must be an odd prime")
        if self.coeffs and self.p < 5:
            raise ConfigError("series expansion needs p >= 5 (use --coeffs 0 for measure-only jobs)")
        if self.level is not None and self.level % self.p == 0:
            raise ConfigError("p divides N")
        if self.levels < 1 or self.terms < 1 or self.coeffs < 0:
            raise ConfigError("levels and terms must be positive, coeffs non-negative")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ConfigError(f"unknown check(s): {', '.join(sorted(unknown))}")


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------

def parse_ap(text: str) -> dict[int, int]:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            q, v = item.split("=")
            out[int(q)] = int(v)
        except ValueError:
            raise ConfigError(f"bad eigenvalue {item!r}; expected q=v") from None
    return out


def parse_center(text: str, p: int):
    """A plain integer, or base-p digits (most significant first) as ``digits@p``."""
    if "@" in text:
        digits, _, prime = text.partition("@")
        if int(prime) != p:
            raise ConfigError(f"center {text!r} is not written in base {p}")
        if not digits or any(not ch.isdigit() or int(ch) >= p for ch in digits):
            raise ConfigError(f"bad base-{p} digits in {text!r}")
        value = int(digits, p)
        return PadicNumber.from_rational(value, p, len(digits))
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"bad center {text!r}") from None


def parse_curve(text: str) -> list[int]:
    try:
        coeffs = [int(t) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad curve {text!r}") from None
    if len(coeffs) != 5:
        raise ConfigError("--curve needs a1,a2,a3,a4,a6")
    return coeffs


def _center_label(c) -> str:
    if isinstance(c, PadicNumber):
        return f"{c.residue_integer()}+O({c.p}^{c.precision})"
    return str(c)


# ---------------------------------------------------------------------------
# Pipeline pieces
# ---------------------------------------------------------------------------

def _space(N: int, sign: int, cache: modsym.SymbolCache | None) -> modsym.ModularSymbolSpace:
    return cache.space(N, sign) if cache else modsym.build_space(N, sign)


def _eigensymbol(N: int, ev: dict[int, int], cache, sign: int = 1) -> modsym.EigenSymbol:
    if cache:
        return cache.eigensymbol(N, ev, sign)
    return modsym.eigensymbol(modsym.build_space(N, sign), ev)


def guess_conductor(curve: numoracle.CurveData, max_level: int = 2000) -> int:
    """Smallest level supported on the bad primes whose space carries the curve's system."""
    bad = curve.bad_primes()
    disc = abs(curve.discriminant)
    caps = {q: min(valuation(disc, q), 2 if q > 3 else 5 if q == 3 else 8) for q in bad}
    levels = [1]
    for q, cap in caps.items():
        levels = [n * q ** e for n in levels for e in range(1, cap + 1)]
    for N in sorted(x for x in levels if x < max_level):
        ev = {q: numoracle.a_p(curve, q) for q in ORACLE_PRIMES if N % q and curve.discriminant % q}
        try:
            modsym.eigensymbol(modsym.build_space(N, 1), ev)
        except modsym.EigenspaceError:
            continue
        return N
    raise ConfigError("could not determine the conductor; pass --level")


def resolve_symbol(cfg: JobConfig, cache) -> tuple[int, dict[int, int], modsym.EigenSymbol]:
    if cfg.curve is not None:
        N = cfg.level if cfg.level is not None else guess_conductor(cfg.curve)
        if N % cfg.p == 0:
            raise ConfigError("p divides N")
        ev = {q: numoracle.a_p(cfg.curve, q) for q in ORACLE_PRIMES
              if N % q and cfg.curve.discriminant % q}
        ev.update(cfg.eigenvalues)
    else:
        if cfg.level is None or not cfg.eigenvalues:
            raise ConfigError("give --curve, or --level together with --ap")
        N, ev = cfg.level, dict(cfg.eigenvalues)
    if cfg.p not in ev:
        raise ConfigError(f"a_{cfg.p} is required")
    try:
        sym = _eigensymbol(N, ev, cache)
    except modsym.EigenspaceError as exc:
        raise ConfigError(f"modsym: {exc}") from None
    return N, ev, sym


def _root_for(ap: int, p: int, wanted: str | None) -> str:
    if ap % p:
        if wanted not in (None, "unit"):
            raise ConfigError("only the unit root is admissible here")
        return "unit"
    if wanted not in (None, "plus", "minus"):
        raise ConfigError("supersingular roots are 'plus' or 'minus'")
    return wanted or "plus"


def _padic_str(x: PadicNumber) -> str:
    if x.is_zero():
        return f"0 + O({x.p}^{x.abs_precision})"
    digits = x.unit_digits()
    return (f"valuation {x.valuation}; digits {''.join(map(str, digits)) if x.p <= 10 else digits}; "
            f"precision {x.abs_precision}")


def _alpha_str(x) -> str:
    return f"{x.a} + ({x.b})*alpha"


def run_checks(cfg: JobConfig, table: measure.MeasureTable, sym, report: dict) -> bool:
    ok = True
    checks: dict[str, dict] = {}
    p = cfg.p
    for name in cfg.checks:
        res: dict = {}
        if name == "additivity":
            n = table.check_additivity()
            res = {"passed": True, "cells_checked": n}
        elif name == "interpolation":
            exact = table.total_mass() == table.expected_mass()
            res = {"passed": exact, "mass": _alpha_str(table.total_mass()),
                   "expected": _alpha_str(table.expected_mass())}
        elif name == "fe":
            samples = [1, 1 + p, 1 - p]
            fe = lseries.functional_equation_check(table, samples, m=cfg.levels,
                                                   fricke_sign=getattr(sym, "fricke_sign", None))
            res = {"passed": fe.passed, "sign": fe.sign, "fricke_sign": fe.fricke_sign,
                   "residuals": [f"s={x.s}: {_padic_str(x.residual)}" for x in fe.samples]}
        elif name == "decay":
            mv = measure.moments(table, min(20, cfg.terms), cfg.levels)
            led = lseries.decay_check(mv)
            res = {"passed": led.passed, "failures": led.failures(),
                   "min_margin": str(min(e.margin for e in led.entries)),
                   "monotone_beyond_p": led.monotone_beyond_p}
        elif name == "modp":
            if not table.ordinary:
                res = {"passed": True, "skipped": "supersingular table"}
            else:
                scan = measure.mod_p_scan(table)
                res = {"passed": True, "all_divisible": scan.all_divisible,
                       "first_nondivisible": None if scan.all_divisible else [scan.level, scan.residue],
                       "alpha_is_one_mod_p": scan.alpha_is_one_mod_p}
        elif name == "psi":
            r = lseries.truncated_psi_inverse(12, list(range(1, 13)), 1, p)
            zero = all(x == 0 for row in r.residual for x in row)
            res = {"passed": zero, "size": 12}
        checks[name] = res
        ok = ok and res["passed"]
    report["checks"] = checks
    return ok


def run(cfg: JobConfig) -> tuple[dict, int]:
    """Execute a job and return (report, exit code)."""
    cfg.validate()
    cache = modsym.SymbolCache(cfg.cache_dir) if cfg.cache_dir else None
    report: dict = {}
    if cfg.table_file:
        table = measure.import_external_table(cfg.table_file)
        sym = None
        N = table.N
        report["input"] = {"source": "external", "file": os.path.basename(cfg.table_file)}
    else:
        N, ev, sym = resolve_symbol(cfg, cache)
        root = _root_for(ev[cfg.p], cfg.p, cfg.root)
        report["input"] = {"source": "curve" if cfg.curve else "eigenvalues", "N": N,
                           "eigenvalues": {str(q): v for q, v in sorted(ev.items())},
                           "fricke_sign": sym.fricke_sign}
        table = measure.build_measure(sym, cfg.p, cfg.levels, root=root, ap=ev[cfg.p])
    rt = table.root_padic(10)
    report["alpha"] = {"root": table.root, "polynomial": lseries.describe_alpha(table),
                       "value": _padic_str(rt)}
    report["measure"] = {"levels": table.n_max, "c0": str(table.c0),
                         "mass": _alpha_str(table.total_mass()),
                         "growth_violation": str(table.max_violation)}
    if cfg.export_measure:
        _atomic_write(cfg.export_measure, measure.export_table(table))
    series_texts = []
    if cfg.coeffs:
        mv = measure.moments(table, cfg.terms - 1, cfg.levels)
        out = []
        for c in cfg.centers:
            s = lseries.taylor_expand(table, c, cfg.coeffs, cfg.levels, cfg.terms, moment_vector=mv)
            order = lseries.order_of_vanishing(s)
            out.append({"center": _center_label(c),
                        "coefficients": [_padic_str(x) for x in s.coeffs],
                        "order": order.order, "ledger": order.ledger})
            series_texts.append(s.export())
        report["series"] = out
    if cfg.export_series:
        _atomic_write(cfg.export_series, "".join(series_texts))
    ok = run_checks(cfg, table, sym, report)
    if cfg.curve is not None and sym is not None:
        report["oracle"] = _oracle_section(cfg.curve, N, sym)
    return report, EXIT_OK if ok else EXIT_CHECK


def _oracle_section(curve: numoracle.CurveData, N: int, sym) -> dict:
    c = numoracle.CurveData(*curve.coefficients, conductor=N)
    eps = -sym.fricke_sign
    L = numoracle.l_value_numeric(c, 2000, eps)
    omega = numoracle.real_period(c)
    ratio = L.value / omega
    approx = Fraction(ratio).limit_denominator(1000)
    lam0 = sym.eval_path(0)
    out = {"floating_point": True, "L(E,1)": f"{L.value:.12f}", "Omega+": f"{omega:.12f}",
           "L/Omega": f"{ratio:.12f}", "L/Omega_rational": str(approx)}
    if approx:
        out["normalization"] = str(lam0 / approx)
    return out


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render(report: dict, fmt: str) -> str:
    if fmt == "json-like-canonical":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    lines: list[str] = []

    def walk(obj, indent: int) -> None:
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        else:
            for item in obj:
                if isinstance(item, (dict, list)):
                    lines.append(f"{pad}-")
                    walk(item, indent + 1)
                else:
                    lines.append(f"{pad}- {item}")

    walk(report, 0)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argparse
# ---------------------------------------------------------------------------

def _add_job_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--curve", help="a1,a2,a3,a4,a6")
    sp.add_argument("--level", type=int, help="level N")
    sp.add_argument("--ap", default="", help="Hecke eigenvalues q=v,... (with --level)")
    sp.add_argument("--p", type=int, required=True, help="the prime p")
    sp.add_argument("--levels", type=int, default=lseries.DEFAULT_LEVEL, help="Riemann level m")
    sp.add_argument("--terms", type=int, default=lseries.DEFAULT_TERMS, help="series terms K")
    sp.add_argument("--coeffs", type=int, default=lseries.DEFAULT_COEFFS, help="Taylor coefficients M")
    sp.add_argument("--center", action="append", help="integer or digits@p (repeatable)")
    sp.add_argument("--root", choices=["unit", "plus", "minus"])
    sp.add_argument("--cache-dir", help=f"modular symbol cache (default ${CACHE_ENV})")
    sp.add_argument("--format", dest="fmt", default="text", choices=["text", "json-like-canonical"])
    sp.add_argument("--export-series", help="write the series in PADICLF-SERIES format")
    sp.add_argument("--export-measure", help="write the measure table in PADICLF-MEASURE format")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padiclf", description="p-adic L-functions of weight-2 newforms")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="run the pipeline")
    _add_job_args(c)
    c.add_argument("--check", action="append", default=[], choices=CHECKS + ("all",))
    ch = sub.add_parser("check", help="run a single check")
    ch.add_argument("name", choices=CHECKS)
    _add_job_args(ch)
    s = sub.add_parser("symbols", help="build or inspect the modular symbol cache")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--sign", type=int, default=1, choices=[1, -1])
    s.add_argument("--ap", default="")
    s.add_argument("--cache-dir")
    s.add_argument("--format", dest="fmt", default="text", choices=["text", "json-like-canonical"])
    im = sub.add_parser("import", help="validate an external measure table")
    im.add_argument("file")
    im.add_argument("--format", dest="fmt", default="text", choices=["text", "json-like-canonical"])
    ps = sub.add_parser("psi", help="truncated triangular inversion")
    ps.add_argument("--K", type=int, default=4)
    ps.add_argument("--k-indices", default="")
    ps.add_argument("--center", type=int, default=1)
    ps.add_argument("--p", type=int, default=5)
    ps.add_argument("--format", dest="fmt", default="text", choices=["text", "json-like-canonical"])
    return ap


def _config_from_args(args) -> JobConfig:
    curve = None
    if args.curve:
        try:
            curve = numoracle.CurveData.from_list(parse_curve(args.curve), args.level)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    checks = list(getattr(args, "check", []) or [])
    if getattr(args, "name", None):
        checks = [args.name]
    if "all" in checks:
        checks = list(CHECKS)
    cache = args.cache_dir or os.environ.get(CACHE_ENV)
    centers = [parse_center(t, args.p) for t in (args.center or ["1"])]
    return JobConfig(p=args.p, curve=curve, level=args.level, eigenvalues=parse_ap(args.ap),
                     levels=args.levels, terms=args.terms, coeffs=args.coeffs, centers=centers,
                     checks=checks, cache_dir=cache, root=args.root, fmt=args.fmt,
                     export_series=args.export_series, export_measure=args.export_measure)


def _symbols(args) -> dict:
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    cache = modsym.SymbolCache(cache_dir) if cache_dir else None
    space = _space(args.level, args.sign, cache)
    out = {"N": args.level, "sign": args.sign, "p1_size": len(space.p1),
           "dimension": space.dimension, "cuspidal_dimension": space.cuspidal_dimension}
    if cache:
        out["cache_file"] = os.path.basename(cache.path(args.level, args.sign))
    ev = parse_ap(args.ap)
    if ev:
        try:
            sym = _eigensymbol(args.level, ev, cache, args.sign)
        except modsym.EigenspaceError as exc:
            raise ConfigError(f"modsym: {exc}") from None
        out["fricke_sign"] = sym.fricke_sign
        out["eval_path(0)"] = str(sym.eval_path(0))
        out["values"] = " ".join(map(str, sym.values))
    return out


def _import(args) -> dict:
    table = measure.import_external_table(args.file)
    out = {"N": table.N, "k": table.ctx.k, "j": table.j, "p": table.p, "ap": table.ctx.ap,
           "root": table.root, "levels": table.n_max, "c0": str(table.c0),
           "additivity": "passed", "mass": _alpha_str(table.total_mass())}
    if table.ordinary:
        scan = measure.mod_p_scan(table)
        out["all_divisible"] = scan.all_divisible
    return out


def _psi(args) -> dict:
    ks = [int(t) for t in args.k_indices.split(",")] if args.k_indices else list(range(1, args.K + 1))
    r = lseries.truncated_psi_inverse(args.K, ks, args.center, args.p)
    fmt = lambda m: [" ".join(str(x) for x in row) for row in m]  # noqa: E731
    return {"K": args.K, "k_indices": ks, "matrix": fmt(r.matrix), "inverse": fmt(r.inverse),
            "residual_is_zero": all(x == 0 for row in r.residual for x in row)}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "fmt", "text")
    try:
        if args.command in ("compute", "check"):
            cfg = _config_from_args(args)
            report, code = run(cfg)
        elif args.command == "symbols":
            report, code = _symbols(args), EXIT_OK
        elif args.command == "import":
            report, code = _import(args), EXIT_OK
        else:
            report, code = _psi(args), EXIT_OK
    except lseries.PrecisionExhausted as exc:
        msg = f"lseries: precision exhausted: {exc}"
        if exc.suggestion:
            m, K, M = exc.suggestion
            msg += f" (try --levels {m} --terms {K} --coeffs {M})"
        print(msg, file=sys.stderr)
        return EXIT_PRECISION
    except measure.AdditivityError as exc:
        print(f"measure: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ConfigError, measure.TableFormatError) as exc:
        print(f"config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, NotImplementedError) as exc:
        print(f"config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(render(report, fmt))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
