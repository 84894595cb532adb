"""The p-adic L-function s -> integral of <x>^(s-1) d mu over Z_p^*.

Evaluation uses Riemann sums over the discs of a fixed level.  The Taylor
expansion around s0 comes from the moments m_k = integral of x~^k d mu via

    L(s0 + h) = sum_j c_j h^j,
    c_j = sum_{k >= j} (p^k / k!) m_k e_{k-j}(s0 - 1, ..., s0 - k),

since C(s-1, k) = q_k(s)/k! with q_k(s) = (s-1)(s-2)...(s-k).  Every
coefficient carries its own certified precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import NamedTuple, Sequence

from . import _linalg
from .measure import MeasureTable, moments, working_digits, MomentVector
from .padics import (PadicNumber, angle_int, binomial_series_power, binomial_tail_floor, digit_sum,
                     p_power_over_factorial_valuation, valuation)

DEFAULT_LEVEL = 5
DEFAULT_TERMS = 40
DEFAULT_COEFFS = 8


class PrecisionExhausted(ArithmeticError):
    """The requested output cannot be certified with the given parameters."""

    def __init__(self, message: str, suggestion: tuple[int, int, int] | None = None):
        super().__init__(message)
        self.suggestion = suggestion


# ---------------------------------------------------------------------------
# p-adic integers as (representative, precision)
# ---------------------------------------------------------------------------

def _as_zp(s, p: int) -> tuple[int, int | None]:
    """Integer representative of s in Z_p and its precision (None = exact)."""
    if isinstance(s, PadicNumber):
        if s.p != p or s.ram != 1:
            raise ValueError("s must be an element of Z_p")
        if s.is_zero():
            return 0, s.precision
        if s.shift < 0:
            raise ValueError("s must be a p-adic integer")
        return s.unit * p ** s.shift, s.precision
    if isinstance(s, Fraction):
        if s.denominator % p == 0:
            raise ValueError("s must be a p-adic integer")
        if s.denominator != 1:
            raise ValueError("pass non-integral rationals as PadicNumber")
        return int(s), None
    return int(s), None


def angle_power(a: int, e: int, p: int, digits: int) -> int:
    """<a>^e mod p^digits for an integer exponent e (negative allowed)."""
    mod = p ** digits
    return pow(angle_int(a, p, digits), e, mod)


def _decay_constant(table: MeasureTable) -> Fraction:
    return 2 * table.alpha_valuation + table.c0


def coefficient_bound(j: int, p: int, const: Fraction) -> Fraction:
    """Lower bound for v(c_j) implied by moment decay (increasing in j)."""
    return Fraction((p - 3) * j + (1 if j else 0), p - 1) - const


# ---------------------------------------------------------------------------
# Point evaluation
# ---------------------------------------------------------------------------

def eval_at(table: MeasureTable, s, m: int | None = None, method: str = "power",
            terms: int = DEFAULT_TERMS) -> PadicNumber:
    """Riemann sum of <a>^(s-1) mu(D(a, p^m)).

    ``method='power'`` raises <a> to an integer representative of s - 1,
    which is exact modulo p^(prec(s) + 1).  ``method='series'`` sums the
    binomial series to ``terms`` terms instead.
    """
    p = table.p
    m = table.n_max if m is None else m
    if not 1 <= m <= table.n_max:
        raise ValueError(f"level {m} exceeds the table (n_max = {table.n_max})")
    s_int, s_prec = _as_zp(s, p)
    if s_int == 1 and s_prec is None:
        # the integrand is constant: the answer is the exact total mass
        return table.embed(table.total_mass(), 40 + max(0, table.error_floor(m)))
    floor = table.error_floor(m)
    if s_prec is not None:
        floor = min(floor, s_prec + 1 + table.growth_bound(m))
    if method == "series":
        floor = min(floor, binomial_tail_floor(terms, p) + table.growth_bound(m))
    work = working_digits(table, m, floor)
    mod = p ** work
    total = PadicNumber.zero(p, floor, table.ram)
    e = s_int - 1
    for a, cell in table.embedded_level(m, floor):
        if method == "power":
            f = angle_power(a, e, p, work)
        elif method == "series":
            sm1 = e if s_prec is None else PadicNumber(p, e, precision=s_prec + 1)
            base = PadicNumber(p, a, precision=work)
            f = binomial_series_power(base, sm1, terms, work).lift() % mod
        else:
            raise ValueError(f"unknown method {method!r}")
        total = total + cell * f
    return total.add_bigoh(floor)


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

def elementary_symmetric(values: Sequence) -> list:
    """[e_0, ..., e_n] of the given values (exact)."""
    e = [1] + [0] * len(values)
    for i, x in enumerate(values, 1):
        for r in range(i, 0, -1):
            e[r] = e[r] + x * e[r - 1]
    return e


@dataclass
class PadicPowerSeries:
    """sum_j c_j (s - s0)^j with per-coefficient precision."""

    p: int
    center: int
    coeffs: list[PadicNumber]
    decay_constant: Fraction         # v(c_j) >= ((p-3) j + 1)/(p-1) - decay_constant
    center_precision: int | None = None
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, j: int) -> PadicNumber:
        return self.coeffs[j]

    def truncation_floor(self, h_valuation: Fraction) -> Fraction:
        """Lower bound for v(sum_{j >= M} c_j h^j) when v(h) >= h_valuation."""
        p, M = self.p, len(self.coeffs)
        slope = Fraction(p - 3, p - 1) + h_valuation
        if slope <= 0:
            raise PrecisionExhausted("series does not converge at this point")
        return Fraction((p - 3) * M + 1, p - 1) - self.decay_constant + M * h_valuation

    def evaluate(self, s) -> PadicNumber:
        s_int, s_prec = _as_zp(s, self.p)
        h = s_int - self.center
        known = [x for x in (s_prec, self.center_precision) if x is not None]
        vh = Fraction(valuation(h, self.p)) if h else Fraction(10 ** 6)
        if known:
            vh = min(vh, Fraction(min(known)))
        trunc = self.truncation_floor(vh)
        if known:
            # moving h inside a disc of radius p^-known
            trunc = min(trunc, min(known) + coefficient_bound(1, self.p, self.decay_constant))
        total = PadicNumber.zero(self.p, trunc, self.coeffs[0].ram)
        power = 1
        for c in self.coeffs:
            total = total + c * power
            power *= h
        return total.add_bigoh(trunc)

    def recenter(self, new_center: int) -> "PadicPowerSeries":
        """Re-expand the truncated polynomial around ``new_center``."""
        d = new_center - self.center
        vd = Fraction(valuation(d, self.p)) if d else Fraction(10 ** 6)
        p, M = self.p, len(self.coeffs)
        out = []
        for i in range(M):
            acc = PadicNumber.zero(p, self.coeffs[0].abs_precision + 40, self.coeffs[0].ram)
            for j in range(i, M):
                acc = acc + self.coeffs[j] * (comb(j, i) * d ** (j - i))
            # dropped terms j >= M; the bound grows with j
            trunc = coefficient_bound(M, p, self.decay_constant) + (M - i) * vd
            out.append(acc.add_bigoh(trunc))
        return PadicPowerSeries(p, new_center, out, self.decay_constant, self.center_precision,
                                dict(self.provenance, recentered_from=self.center))

    def export(self) -> str:
        prov = self.provenance
        head = (f"PADICLF-SERIES v1; N={prov.get('N')}; p={self.p}; "
                f"alpha={prov.get('alpha')}; center={self.center};")
        lines = [head]
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                lines.append(f"{j} zero - {c.abs_precision}")
            else:
                digits = "".join(str(d) if self.p <= 10 else f"{d}," for d in c.unit_digits())
                lines.append(f"{j} {c.valuation} {digits.rstrip(',')} {c.abs_precision}")
        return "\n".join(lines) + "\n"


def taylor_expand(table: MeasureTable, s0=1, M: int = DEFAULT_COEFFS, m: int | None = None,
                  K: int = DEFAULT_TERMS, moment_vector: MomentVector | None = None) -> PadicPowerSeries:
    """Taylor coefficients c_0..c_{M-1} of L_p around s0."""
    p = table.p
    if p < 5:
        raise ValueError("Taylor expansion needs p >= 5")
    m = table.n_max if m is None else m
    if M < 1:
        raise ValueError("need at least one coefficient")
    if K < M:
        raise PrecisionExhausted(f"K = {K} series terms cannot give {M} coefficients",
                                 (m, max(2 * K, M + 1), M))
    const = _decay_constant(table)
    tail = Fraction((p - 3) * K + 1, p - 1) - const
    if tail <= coefficient_bound(M - 1, p, const):
        raise PrecisionExhausted(f"the series tail (floor {tail}) swamps c_{M - 1}",
                                 (m, 2 * K, M))
    mv = moment_vector if moment_vector is not None else moments(table, K - 1, m)
    if len(mv) < K:
        raise ValueError("moment vector is too short")
    s_int, s_prec = _as_zp(s0, p)
    xs = [mv[k] * Fraction(p ** k, factorial(k)) for k in range(K)]
    # e_table[k][r] = e_r(s0-1, ..., s0-k)
    e_table = [[1]]
    for k in range(1, K):
        prev, x = e_table[-1], s_int - k
        e_table.append([(prev[r] if r < k else 0) + (x * prev[r - 1] if r else 0)
                        for r in range(k + 1)])
    coeffs = []
    for j in range(M):
        acc = None
        for k in range(j, K):
            term = xs[k] * e_table[k][k - j]
            acc = term if acc is None else acc + term
        c = acc.add_bigoh(tail)
        if s_prec is not None:
            c = c.add_bigoh(s_prec - const)
        coeffs.append(c)
    prov = {"N": table.N, "level": m, "terms": K, "alpha": describe_alpha(table), "root": table.root}
    return PadicPowerSeries(p, s_int, coeffs, const, s_prec, prov)


def describe_alpha(table: MeasureTable) -> str:
    ctx = table.ctx
    return f"{table.root} root of X^2 - ({ctx.ap})X + {ctx.norm}"


# ---------------------------------------------------------------------------
# Order of vanishing
# ---------------------------------------------------------------------------

class OrderReport(NamedTuple):
    order: int | str                  # 'undetermined' when nothing is provably nonzero
    leading_coeff: PadicNumber | None
    ledger: list[str]

    @property
    def determined(self) -> bool:
        return self.order != "undetermined"


def order_of_vanishing(series: PadicPowerSeries) -> OrderReport:
    """First provably nonzero coefficient, with the zero-consistency ledger."""
    if not series.coeffs:
        raise ValueError("empty series")
    ledger = []
    for j, c in enumerate(series.coeffs):
        if c.provably_nonzero():
            ledger.append(f"c_{j}: provably nonzero (valuation {c.valuation}, "
                          f"known mod p^{c.abs_precision})")
            return OrderReport(j, c, ledger)
        ledger.append(f"c_{j}: consistent with zero up to p^{c.abs_precision}")
    return OrderReport("undetermined", None, ledger)


# ---------------------------------------------------------------------------
# Functional equation
# ---------------------------------------------------------------------------

class FESample(NamedTuple):
    s: int
    left: PadicNumber
    right: PadicNumber            # <N>^(1-s) L(2-s), before the sign
    residual: PadicNumber
    ok: bool


class FEReport(NamedTuple):
    sign: int | None
    samples: list[FESample]
    fricke_sign: int | None

    @property
    def passed(self) -> bool:
        return all(x.ok for x in self.samples)


class SignInconsistency(ArithmeticError):
    pass


def functional_equation_check(table: MeasureTable, samples: Sequence[int] = (1,),
                              N: int | None = None, m: int | None = None,
                              fricke_sign: int | None = None) -> FEReport:
    """Compare L(s) with +-<N>^(1-s) L(2-s) at integer samples.

    The sign is read off at the first sample where both sides are provably
    nonzero and then held fixed.
    """
    if table.ctx.k != 2:
        raise ValueError("only weight 2 is supported")
    p = table.p
    N = table.N if N is None else N
    if N is None:
        raise ValueError("the level is needed")
    if N % p == 0:
        raise ValueError("p divides N")
    sign = None
    pending = []
    results = []
    for s in samples:
        s = int(s)
        left = eval_at(table, s, m)
        other = eval_at(table, 2 - s, m)
        digits = math.ceil(other.abs_precision - table.growth_bound(table.n_max)) + 2
        right = other * angle_power(N, 1 - s, p, digits)
        if sign is None and left.provably_nonzero() and right.provably_nonzero():
            if (left - right).is_zero():
                sign = 1
            elif (left + right).is_zero():
                sign = -1
            else:
                raise SignInconsistency(f"neither sign fits at s = {s}")
        pending.append((s, left, right))
    for s, left, right in pending:
        eps = 1 if sign is None else sign
        residual = left - right * eps
        ok = residual.is_zero()
        if not ok and sign is not None and (left + right * eps).is_zero():
            raise SignInconsistency(f"sign flips at s = {s}")
        results.append(FESample(s, left, right, residual, ok))
    return FEReport(sign, results, fricke_sign)


# ---------------------------------------------------------------------------
# Moment decay
# ---------------------------------------------------------------------------

class DecayEntry(NamedTuple):
    k: int
    lower_bound: Fraction         # certified lower bound on v(p^k m_k / k!)
    bound: Fraction
    margin: Fraction
    passed: bool


class DecayLedger(NamedTuple):
    entries: list[DecayEntry]
    monotone_beyond_p: bool

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[int]:
        return [e.k for e in self.entries if not e.passed]


def decay_bound(k: int, p: int, alpha_valuation: Fraction, c0: Fraction) -> Fraction:
    return Fraction((p - 3) * k + digit_sum(k, p), p - 1) - 2 * alpha_valuation - c0


def decay_check(mv: MomentVector | Sequence[PadicNumber], p: int | None = None,
                alpha_valuation: Fraction | None = None, c0: Fraction | None = None) -> DecayLedger:
    """Check v(p^k m_k / k!) >= ((p-3)k + sigma_k)/(p-1) - 2 v(alpha) - c0."""
    if isinstance(mv, MomentVector):
        table = mv.table
        p = table.p if p is None else p
        alpha_valuation = table.alpha_valuation if alpha_valuation is None else alpha_valuation
        c0 = table.c0 if c0 is None else c0
        entries = mv.entries
    else:
        entries = list(mv)
        if p is None or alpha_valuation is None or c0 is None:
            raise ValueError("p, alpha_valuation and c0 are needed for bare moments")
    if p < 5:
        raise ValueError("the decay estimate needs p >= 5")
    out = []
    for k, mk in enumerate(entries):
        lb = mk.valuation_lower_bound() + p_power_over_factorial_valuation(k, p)
        b = decay_bound(k, p, Fraction(alpha_valuation), Fraction(c0))
        out.append(DecayEntry(k, Fraction(lb), b, Fraction(lb) - b, lb >= b))
    margins = [e.margin for e in out if e.k > p]
    monotone = all(x <= y for x, y in zip(margins, margins[1:]))
    return DecayLedger(out, monotone)


# ---------------------------------------------------------------------------
# Falling factorials and the triangular matrix
# ---------------------------------------------------------------------------

def _ffd_int(n: int, j: int, s: int) -> int:
    """j! e_{n-j}(s-1, ..., s-n) as an exact integer."""
    if j > n:
        return 0
    e = elementary_symmetric([s - i for i in range(1, n + 1)])
    return factorial(j) * e[n - j]


def falling_factorial_derivative(n: int, j: int, s, p: int | None = None,
                                 prec: int = 20) -> PadicNumber:
    """j-th derivative of q_n(s) = (s-1)...(s-n), i.e. j! e_{n-j}(s-1, ..., s-n)."""
    if not 0 <= n <= 30 or j < 0:
        raise ValueError("need 0 <= n <= 30 and j >= 0")
    if isinstance(s, PadicNumber):
        p = s.p
        s_int, s_prec = _as_zp(s, p)
        prec = s_prec
    elif p is None:
        raise ValueError("p is needed for an integer argument")
    else:
        s_int = int(s)
    return PadicNumber.from_rational(_ffd_int(n, j, s_int), p, prec)


def _poly_from_roots(roots: Sequence[int]) -> list[int]:
    """Coefficients (constant first) of prod (x - r)."""
    c = [1]
    for r in roots:
        c = [(c[i - 1] if i else 0) - r * (c[i] if i < len(c) else 0) for i in range(len(c) + 1)]
    return c


def _poly_derivative(c: Sequence[int], times: int = 1) -> list[int]:
    for _ in range(times):
        c = [i * c[i] for i in range(1, len(c))]
    return list(c) or [0]


def _poly_shift(c: Sequence[int], s: int) -> list[int]:
    """Coefficients in h of c(s + h)."""
    out = [0] * len(c)
    for i, ci in enumerate(c):
        for k in range(i + 1):
            out[k] += ci * comb(i, k) * s ** (i - k)
    return out


def verify_c1_lemma(n: int, j: int, s: int, t: int, p: int = 5) -> bool:
    """Expand q_n^(j)(s + p^t) in powers of p^t and compare with c_k = C(j+k, k).

    The k = 1 coefficient is (j+1) j! e_{n-j-1}(s-1, ..., s-n).
    """
    if not 1 <= j < n <= 12:
        raise ValueError("need 1 <= j < n <= 12")
    poly = _poly_derivative(_poly_from_roots(range(1, n + 1)), j)
    in_h = _poly_shift(poly, s)
    e = elementary_symmetric([s - i for i in range(1, n + 1)])
    jf = factorial(j)
    if in_h[1] != (j + 1) * jf * e[n - j - 1]:
        return False
    if any(in_h[k] != jf * comb(j + k, k) * e[n - j - k] for k in range(len(in_h))):
        return False
    h = p ** t
    value = sum(c * h ** k for k, c in enumerate(in_h))
    return value == sum(jf * comb(j + k, k) * e[n - j - k] * h ** k for k in range(n - j + 1))


class PsiResult(NamedTuple):
    matrix: list[list[Fraction]]
    inverse: list[list[Fraction]]
    residual: list[list[Fraction]]


class IntegralityError(ArithmeticError):
    pass


def psi_entry(ki: int, kj: int, s0: Fraction) -> Fraction:
    """(1/k_i!) d^{k_i}/ds^{k_i} q_{k_j}(s) at s0, via the binomial expansion."""
    if kj < ki:
        return Fraction(0)
    e = elementary_symmetric(list(range(1, kj + 1)))
    return sum((Fraction((-1) ** r * e[r] * comb(kj - r, ki)) * Fraction(s0) ** (kj - ki - r)
                for r in range(kj - ki + 1)), Fraction(0))


def kummer_identity_holds(ki: int, kj: int, p: int) -> bool:
    """v_p C(kj - r, ki) = (sigma_{ki} + sigma_{kj-ki-r} - sigma_{kj-r})/(p-1) for 0 <= r <= kj-ki."""
    for r in range(kj - ki + 1):
        lhs = valuation(comb(kj - r, ki), p)
        rhs = Fraction(digit_sum(ki, p) + digit_sum(kj - ki - r, p) - digit_sum(kj - r, p), p - 1)
        if lhs != rhs:
            return False
    return True


def truncated_psi_inverse(K: int, k_indices: Sequence[int], s0=1, p: int = 5) -> PsiResult:
    """K x K truncation of the unitriangular matrix and its exact inverse."""
    if not 1 <= K <= 16:
        raise ValueError("need 1 <= K <= 16")
    ks = list(k_indices)[:K]
    if len(ks) < K:
        raise ValueError("not enough k-indices")
    if any(a >= b for a, b in zip(ks, ks[1:])) or ks[0] < 0:
        raise ValueError("k-indices must be strictly increasing and non-negative")
    s0 = Fraction(s0)
    if s0.denominator % p == 0:
        raise ValueError("s0 must be a p-adic integer")
    A = [[psi_entry(ki, kj, s0) for kj in ks] for ki in ks]
    for i, ki in enumerate(ks):
        for j, kj in enumerate(ks[i:], i):
            if A[i][j].denominator % p == 0 or not kummer_identity_holds(ki, kj, p):
                raise IntegralityError(f"entry ({i + 1}, {j + 1}) is not p-integral")
    # the same entries from the falling-factorial side
    if s0.denominator == 1:
        for i, ki in enumerate(ks):
            for j, kj in enumerate(ks):
                if kj >= ki and A[i][j] != _ffd_int(kj, ki, int(s0)) // factorial(ki):
                    raise ArithmeticError(f"entry ({i + 1}, {j + 1}) disagrees with e_(k_j-k_i)")
    inv = _linalg.upper_unitriangular_inverse(A)
    for i in range(K):
        for j in range(K):
            x = inv[i][j]
            if (j < i and x) or (i == j and x != 1):
                raise ArithmeticError("inverse is not unitriangular")
            if x.denominator % p == 0:
                raise IntegralityError(f"inverse entry ({i + 1}, {j + 1}) is not p-integral")
    prod = _linalg.matmul(A, inv)
    residual = [[prod[i][j] - (1 if i == j else 0) for j in range(K)] for i in range(K)]
    return PsiResult(A, inv, residual)
