"""The cyclotomic distribution attached to an eigensymbol and a Hecke root.

For a root alpha of X^2 - a_p X + p^(k-1) the distribution is

    mu(D(a, p^n)) = alpha^(-n) * (lam(a/p^n) - alpha^(-1) * lam(a/p^(n-1)))

on the discs D(a, p^n) = a + p^n Z_p, a prime to p.  Values are kept as
exact elements of Q(alpha); p-adic numbers only appear when integrating.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .modsym import EigenSymbol
from .padics import (AlphaContext, AlphaElement, PadicNumber, angle_int, hecke_roots,
                     valuation)

NATIVE = "native"
EXTERNAL = "external"
_HEADER = "PADICLF-MEASURE v1"


class AdditivityError(ValueError):
    """A disc value differs from the sum over its p sub-discs."""

    def __init__(self, n: int, a: int, expected, got):
        super().__init__(f"additivity fails at level {n}, residue {a}: "
                         f"expected {expected}, children sum to {got}")
        self.level = n
        self.residue = a


def alpha_valuation(x: AlphaElement, label: str, start: int = 20) -> Fraction | float:
    """Exact p-adic valuation of x under alpha -> the root named ``label``."""
    if x.is_zero():
        return math.inf
    ctx = x.ctx
    if x.b == 0:
        return Fraction(valuation(x.a, ctx.p))
    if label in ("plus", "minus"):
        # conjugation is an isometry of the ramified extension
        return Fraction(valuation(x.norm(), ctx.p), 2)
    slack = max(0, -valuation(x.a, ctx.p), -valuation(x.b, ctx.p)) if x.a else \
        max(0, -valuation(x.b, ctx.p))
    prec = start + slack
    while True:
        root = _root(ctx, label, prec)
        e = x.embed(root)
        if not e.is_zero():
            return e.valuation
        prec *= 2


def _root(ctx: AlphaContext, label: str, prec: int) -> PadicNumber:
    for r in hecke_roots(ctx.ap, ctx.k, ctx.p, prec):
        if r.label == label:
            return r.root
    raise ValueError(f"no root labelled {label!r} for a_p = {ctx.ap}")


class ModPReport(NamedTuple):
    all_divisible: bool
    level: int | None
    residue: int | None
    alpha_is_one_mod_p: bool


@dataclass
class MeasureTable:
    """Exact disc values mu(D(a, p^n)) for 1 <= n <= n_max, a mod p^n prime to p."""

    p: int
    n_max: int
    ctx: AlphaContext
    root: str                                 # 'unit', 'nonunit', 'plus' or 'minus'
    levels: dict[int, dict[int, AlphaElement]]
    lam0: Fraction                            # lam(0), the path {0, oo}
    source: str = NATIVE
    N: int | None = None
    j: int = 0
    c0: Fraction = Fraction(0)
    max_violation: Fraction | None = None     # deepest shortfall below the growth bound
    _roots: dict = field(default_factory=dict, repr=False)
    _embedded: dict = field(default_factory=dict, repr=False)

    # -- basic data --------------------------------------------------------------
    @property
    def alpha(self) -> AlphaElement:
        return AlphaElement.generator(self.ctx)

    @property
    def alpha_valuation(self) -> Fraction:
        return Fraction(1, 2) if self.root in ("plus", "minus") else \
            Fraction(0) if self.root == "unit" else Fraction(self.ctx.k - 1)

    @property
    def ordinary(self) -> bool:
        return self.root == "unit"

    @property
    def ram(self) -> int:
        return 2 if self.root in ("plus", "minus") else 1

    def value(self, a: int, n: int) -> AlphaElement:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"level {n} outside 1..{self.n_max}")
        return self.levels[n][a % self.p ** n]

    def total_mass(self) -> AlphaElement:
        return sum(self.levels[1].values(), AlphaElement(0, 0, self.ctx))

    def expected_mass(self) -> AlphaElement:
        """(1 - 1/alpha)^2 * lam(0), the mass forced by the Hecke relation."""
        one = AlphaElement(1, 0, self.ctx)
        return (one - self.alpha.inverse()) ** 2 * self.lam0

    # -- p-adic embedding ----------------------------------------------------------
    def root_padic(self, prec: int) -> PadicNumber:
        """The chosen root to ``prec`` uniformizer-free digits of v_p."""
        r = self._roots.get(prec)
        if r is None:
            r = self._roots[prec] = _root(self.ctx, self.root, prec)
        return r

    def embed(self, x: AlphaElement, prec: Fraction) -> PadicNumber:
        """x as a p-adic number known modulo p^prec."""
        p = self.p
        loss = 0
        if x.b:
            loss = max(0, -valuation(x.b, p))
        need = math.ceil(prec) + loss + 1
        out = x.embed(self.root_padic(need))
        return out.add_bigoh(prec)

    def embedded_level(self, m: int, prec: Fraction) -> list[tuple[int, PadicNumber]]:
        """Nonzero cells of level m as p-adic numbers mod p^prec (cached)."""
        key = (m, Fraction(prec))
        cells = self._embedded.get(key)
        if cells is None:
            cells = [(a, self.embed(v, prec)) for a, v in sorted(self.levels[m].items())
                     if not v.is_zero()]
            self._embedded[key] = cells
        return cells

    def valuation_of(self, x: AlphaElement) -> Fraction | float:
        return alpha_valuation(x, self.root)

    # -- precision bookkeeping -----------------------------------------------------
    def error_floor(self, m: int) -> Fraction:
        """err(m) = m (1 - v(alpha)) - v(alpha) - c0."""
        va = self.alpha_valuation
        return m * (1 - va) - va - self.c0

    def growth_bound(self, n: int) -> Fraction:
        """Lower bound for v(mu(D(a, p^n))): -(n+1) v(alpha) - c0."""
        return -(n + 1) * self.alpha_valuation - self.c0

    # -- checks ----------------------------------------------------------------------
    def check_additivity(self) -> int:
        """Verify every parent equals the sum of its children; returns #checks."""
        p = self.p
        count = 0
        mass = self.total_mass()
        if self.source == NATIVE and mass != self.expected_mass():
            raise AdditivityError(0, 0, self.expected_mass(), mass)
        for n in range(1, self.n_max):
            pn = p ** n
            parent, child = self.levels[n], self.levels[n + 1]
            for a, v in parent.items():
                s = AlphaElement(0, 0, self.ctx)
                for b in range(p):
                    s = s + child[a + b * pn]
                if s != v:
                    raise AdditivityError(n, a, v, s)
                count += 1
        return count

    def with_values(self, levels: dict[int, dict[int, AlphaElement]]) -> "MeasureTable":
        return MeasureTable(self.p, self.n_max, self.ctx, self.root, levels, self.lam0,
                            self.source, self.N, self.j, self.c0, self.max_violation)


def _residues(p: int, n: int) -> list[int]:
    return [a for a in range(p ** n) if a % p]


def _compute_c0(table: MeasureTable) -> tuple[Fraction, Fraction | None]:
    va = table.alpha_valuation
    worst = math.inf
    for v in table.levels[1].values():
        if not v.is_zero():
            worst = min(worst, table.valuation_of(v) + 2 * va)
    c0 = Fraction(0) if worst == math.inf else max(Fraction(0), -Fraction(worst))
    table.c0 = c0
    violation = None
    for n in range(2, table.n_max + 1):
        bound = table.growth_bound(n)
        for v in table.levels[n].values():
            if v.is_zero():
                continue
            short = bound - table.valuation_of(v)
            if short > 0 and (violation is None or short > violation):
                violation = short
    return c0, violation


def build_measure(symbol: EigenSymbol, p: int, n_max: int, root: str = "unit",
                  ap: int | None = None, check: bool = True) -> MeasureTable:
    """Tabulate mu(D(a, p^n)) for n <= n_max from a weight-2 eigensymbol."""
    if symbol.N % p == 0:
        raise ValueError("p divides N")
    if n_max < 1:
        raise ValueError("need at least one level")
    if ap is None:
        if p not in symbol.eigenvalues:
            raise ValueError(f"a_{p} is not known for this symbol")
        ap = symbol.eigenvalues[p]
    roots = {r.label: r for r in hecke_roots(ap, 2, p, 4, level=symbol.N)}
    if root not in roots:
        raise ValueError(f"root must be one of {sorted(roots)}")
    if not roots[root].admissible:
        raise ValueError(f"the {root} root is not admissible")
    ctx = AlphaContext(ap, 2, p)
    alpha = AlphaElement.generator(ctx)
    ainv = alpha.inverse()
    lam_prev = {0: symbol.eval_path(Fraction(0))}
    levels: dict[int, dict[int, AlphaElement]] = {}
    scale = AlphaElement(1, 0, ctx)
    for n in range(1, n_max + 1):
        pn = p ** n
        scale = scale * ainv
        lam_here: dict[int, Fraction] = {}
        level: dict[int, AlphaElement] = {}
        pm = pn // p
        for a in range(pn):
            lam_here[a] = symbol.eval_path(Fraction(a, pn))
        for a in _residues(p, n):
            # lam is 1-periodic, so level 0 only needs lam(0)
            inner = ainv * lam_prev[a % pm]
            level[a] = scale * (AlphaElement(lam_here[a], 0, ctx) - inner)
        levels[n] = level
        lam_prev = lam_here
    table = MeasureTable(p, n_max, ctx, root, levels, symbol.eval_path(0), NATIVE, symbol.N)
    if check:
        table.check_additivity()
    table.c0, table.max_violation = _compute_c0(table)
    return table


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------

class Integral(NamedTuple):
    value: PadicNumber
    error_valuation: Fraction


def riemann_integral(table: MeasureTable, m: int, f: Callable[[int], int | Fraction] | Mapping[int, int | Fraction],
                     prec: Fraction | None = None, locally_constant: bool = True) -> Integral:
    """sum_a f(a) mu(D(a, p^m)).

    If ``f`` is locally constant at level m the sum is the exact integral and
    is returned at precision ``prec`` (default 30).  Otherwise the answer
    carries the floor err(m).
    """
    if not 1 <= m <= table.n_max:
        raise ValueError(f"level {m} exceeds the table (n_max = {table.n_max})")
    get = f.__getitem__ if isinstance(f, Mapping) else f
    s = AlphaElement(0, 0, table.ctx)
    for a, v in table.levels[m].items():
        c = get(a)
        if c:
            s = s + v * Fraction(c)
    floor = Fraction(30) if prec is None else Fraction(prec)
    if not locally_constant:
        floor = min(floor, table.error_floor(m))
    return Integral(table.embed(s, floor), floor)


@dataclass
class MomentVector:
    """m_k = integral of x~^k d mu, x~ = (<x> - 1)/p, for 0 <= k <= K."""

    entries: list[PadicNumber]
    level: int
    error_valuation: Fraction      # floor for k >= 1; m_0 is exact
    table: MeasureTable

    def __getitem__(self, k: int) -> PadicNumber:
        return self.entries[k]

    def __len__(self) -> int:
        return len(self.entries)


def tilde_residues(p: int, m: int, prec: int) -> dict[int, int]:
    """a -> (<a> - 1)/p mod p^prec for a mod p^m prime to p."""
    out = {}
    for a in _residues(p, m):
        out[a] = (angle_int(a, p, prec + 1) - 1) // p
    return out


def working_digits(table: MeasureTable, m: int, floor: Fraction) -> int:
    """Digits of an integrand needed so that products with cells reach ``floor``."""
    low = table.growth_bound(m)
    if table.max_violation:
        low -= table.max_violation
    return max(1, math.ceil(floor - low) + 2)


def moments(table: MeasureTable, K: int, m: int) -> MomentVector:
    """Riemann approximations of m_k at level m.

    x~ changes by p^(m-1) inside a disc of level m, so the floor is err(m) - 1.
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    if not 1 <= m <= table.n_max:
        raise ValueError(f"level {m} exceeds the table (n_max = {table.n_max})")
    p = table.p
    floor = table.error_floor(m) - 1
    work = working_digits(table, m, floor)
    tildes = tilde_residues(p, m, work)
    mod = p ** work
    acc = [PadicNumber.zero(p, floor, table.ram) for _ in range(K + 1)]
    for a, cell in table.embedded_level(m, floor):
        t, w = tildes[a], 1
        for k in range(1, K + 1):
            w = w * t % mod
            acc[k] = acc[k] + cell * w
    mass = table.embed(table.total_mass(), max(floor, 0) + 40)
    entries = [mass] + [acc[k].add_bigoh(floor) for k in range(1, K + 1)]
    return MomentVector(entries, m, floor, table)


def mod_p_scan(table: MeasureTable) -> ModPReport:
    """First disc whose value is not divisible by p (ordinary tables only)."""
    if not table.ordinary:
        raise ValueError("mod-p scan needs the unit root")
    a1 = table.root_padic(2)
    alpha_one = (a1.unit - 1) % table.p == 0
    for n in range(1, table.n_max + 1):
        for a in sorted(table.levels[n]):
            v = table.levels[n][a]
            if not v.is_zero() and table.valuation_of(v) <= 0:
                return ModPReport(False, n, a, alpha_one)
    return ModPReport(True, None, None, alpha_one)


# ---------------------------------------------------------------------------
# External tables
# ---------------------------------------------------------------------------

def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def export_table(table: MeasureTable) -> str:
    lines = [f"{_HEADER}; N={table.N if table.N is not None else 0}; k={table.ctx.k}; j={table.j}; "
             f"p={table.p}; ap={table.ctx.ap}; root={table.root}; levels={table.n_max}; "
             f"c0={_fmt(table.c0)}"]
    for n in range(1, table.n_max + 1):
        for a in sorted(table.levels[n]):
            v = table.levels[n][a]
            line = f"{n} {a} {_fmt(v.a)}"
            if v.b:
                line += f" +alpha* {_fmt(v.b)}"
            lines.append(line)
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"^(\d+) (\d+) (-?\d+/\d+)(?: \+alpha\* (-?\d+/\d+))?$")


class TableFormatError(ValueError):
    pass


def parse_table(text: str) -> MeasureTable:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise TableFormatError("no data")
    head = [h.strip() for h in rows[0].split(";")]
    if head[0] != _HEADER:
        raise TableFormatError(f"bad header {head[0]!r}")
    fields = {}
    for h in head[1:]:
        if "=" not in h:
            raise TableFormatError(f"malformed header field {h!r}")
        key, val = h.split("=", 1)
        fields[key.strip()] = val.strip()
    try:
        N, k, j, p, ap = (int(fields[x]) for x in ("N", "k", "j", "p", "ap"))
        n_max = int(fields["levels"])
        c0 = Fraction(fields["c0"])
        root = fields["root"]
    except (KeyError, ValueError) as exc:
        raise TableFormatError(f"missing or invalid header field: {exc}") from None
    if root not in ("unit", "plus", "minus"):
        raise TableFormatError(f"unknown root {root!r}")
    if not 0 <= j <= k - 2:
        raise TableFormatError("need 0 <= j <= k - 2")
    if n_max < 1 or len(rows) == 1:
        raise TableFormatError("no data")
    ctx = AlphaContext(ap, k, p)
    levels: dict[int, dict[int, AlphaElement]] = {n: {} for n in range(1, n_max + 1)}
    for ln in rows[1:]:
        m = _LINE.match(ln)
        if not m:
            raise TableFormatError(f"malformed line {ln!r}")
        n, a = int(m.group(1)), int(m.group(2))
        if n not in levels or a % p == 0 or not 0 <= a < p ** n:
            raise TableFormatError(f"cell ({n}, {a}) out of range")
        b = Fraction(m.group(4)) if m.group(4) else Fraction(0)
        levels[n][a] = AlphaElement(Fraction(m.group(3)), b, ctx)
    for n in levels:
        if len(levels[n]) != (p - 1) * p ** (n - 1):
            raise TableFormatError(f"level {n} is incomplete")
    return MeasureTable(p, n_max, ctx, root, levels, Fraction(0), EXTERNAL,
                        N or None, j, c0)


def import_external_table(source) -> MeasureTable:
    """Read and validate a table from a path or a file object."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    table = parse_table(text)
    if table.N is not None and table.N % table.p == 0:
        raise TableFormatError("p divides N")
    hecke_roots(table.ctx.ap, table.ctx.k, table.p, 4, level=table.N)
    table.check_additivity()
    return table
