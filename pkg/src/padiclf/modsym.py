"""Weight-2 modular symbols for Gamma_0(N) via Manin symbols.

A Manin symbol ``(c : d)`` in P^1(Z/NZ) stands for the path
``{g(0), g(oo)} = {b/d, a/c}`` with ``g = [[a, b], [c, d]]`` in SL_2(Z).
The spaces built here are *dual*: a vector of rational numbers indexed by
P^1 that vanishes on the two- and three-term relations is a homomorphism
from the module of modular symbols to Q.  The period map of a newform is
such a homomorphism, and it is a Hecke eigenvector for the transposed
action.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterator, Mapping, Sequence

from . import _linalg

MAX_LEVEL = 10_000


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


def _prime_divisors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


# ---------------------------------------------------------------------------
# P^1(Z/NZ)
# ---------------------------------------------------------------------------

class P1Index:
    """Canonical representatives of P^1(Z/NZ) and a lookup from pairs."""

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("level must be positive")
        self.N = N
        self._norm_cache: dict[tuple[int, int], tuple[int, int]] = {}
        reps = set()
        for g in _divisors(N):
            for v in range(N):
                if gcd(gcd(g % N, v), N) == 1:
                    reps.add(self.normalize(g, v))
        self.representatives: list[tuple[int, int]] = sorted(reps)
        self._index = {r: i for i, r in enumerate(self.representatives)}

    def __len__(self) -> int:
        return len(self.representatives)

    def normalize(self, c: int, d: int) -> tuple[int, int]:
        N = self.N
        c, d = c % N, d % N
        key = (c, d)
        hit = self._norm_cache.get(key)
        if hit is not None:
            return hit
        if N == 1:
            rep = (0, 0)
        else:
            g = gcd(c, N)
            if gcd(g, d) != 1:
                raise ValueError(f"({c}:{d}) is not in P^1(Z/{N})")
            if g == N:
                rep = (0, 1)
            else:
                m = N // g
                t = pow(c // g, -1, m)
                while gcd(t, N) != 1:
                    t += m
                v = t * d % N
                # remaining freedom: units congruent to 1 mod N/g
                best = v
                for k in range(1, g):
                    lam = 1 + k * m
                    if gcd(lam, N) == 1:
                        best = min(best, lam * v % N)
                rep = (g, best)
        self._norm_cache[key] = rep
        return rep

    def index(self, c: int, d: int) -> int:
        return self._index[self.normalize(c, d)]


def lift_to_sl2(c: int, d: int, N: int) -> tuple[int, int, int, int]:
    """A matrix [[a, b], [c', d']] in SL_2(Z) with (c', d') = (c, d) mod N."""
    c, d = c % N, d % N
    if N == 1:
        return 1, 0, 0, 1
    if c == 0:
        c = N
    while gcd(c, d) != 1:
        d += N
    g, x, y = _xgcd(c, d)
    # x c + y d = 1  ->  a = y, b = -x gives a d - b c = 1
    return y, -x, c, d


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

def _convergents(partials: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Convergents of a0 + e1/(a1 + e2/(a2 + ...)); partials are (a_k, e_k)."""
    p2, q2, p1, q1 = 0, 1, 1, 0
    out = []
    for a, e in partials:
        p, q = a * p1 + e * p2, a * q1 + e * q2
        out.append((p, q))
        p2, q2, p1, q1 = p1, q1, p, q
    return out


def floor_cf(r: Fraction) -> list[tuple[int, int]]:
    n, d = r.numerator, r.denominator
    out = []
    while d:
        a = n // d
        out.append((a, 1))
        n, d = d, n - a * d
    return out


def nearest_cf(r: Fraction) -> list[tuple[int, int]]:
    x = Fraction(r)
    out = []
    e = 1
    while True:
        a = math.floor(x + Fraction(1, 2))
        out.append((a, e))
        y = x - a
        if y == 0:
            return out
        e = 1 if y > 0 else -1
        x = 1 / abs(y)


def unimodular_steps(r: Fraction, method: str = "floor") -> Iterator[tuple[int, int]]:
    """Bottom rows (c, d) of g_k in SL_2(Z) with {oo, r} = sum_k {g_k 0, g_k oo}."""
    partials = floor_cf(r) if method == "floor" else nearest_cf(r)
    conv = _convergents(partials)
    prev = (1, 0)
    for p, q in conv:
        det = p * prev[1] - prev[0] * q
        if det == 1:
            yield q, prev[1]
        elif det == -1:
            yield -q, prev[1]
        else:  # pragma: no cover - convergents are always adjacent
            raise ArithmeticError("non-unimodular continued fraction step")
        prev = (p, q)


# ---------------------------------------------------------------------------
# Cusps
# ---------------------------------------------------------------------------

class CuspClasses:
    """Gamma_0(N)-classes of cusps, tested pairwise."""

    def __init__(self, N: int):
        self.N = N
        self.reps: list[tuple[int, int]] = []

    @staticmethod
    def _reduce(a: int, c: int) -> tuple[int, int]:
        if c == 0:
            return 1, 0
        g = gcd(a, c)
        a, c = a // g, c // g
        if c < 0:
            a, c = -a, -c
        return a, c

    def equivalent(self, x: tuple[int, int], y: tuple[int, int]) -> bool:
        (a1, c1), (a2, c2) = x, y
        s1 = pow(a1, -1, c1) if c1 > 1 else 1 if c1 == 0 else 0
        s2 = pow(a2, -1, c2) if c2 > 1 else 1 if c2 == 0 else 0
        m = gcd(c1 * c2, self.N)
        return (s1 * c2 - s2 * c1) % m == 0

    def index(self, a: int, c: int) -> int:
        x = self._reduce(a, c)
        for i, y in enumerate(self.reps):
            if self.equivalent(x, y):
                return i
        self.reps.append(x)
        return len(self.reps) - 1


def cusp_count(N: int) -> int:
    """Number of cusps of X_0(N)."""
    return sum(_euler_phi(gcd(d, N // d)) for d in _divisors(N))


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# Hecke (Heilbronn-Merel) matrices
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def merel_matrices(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """Matrices [[a, b], [c, d]] with ad - bc = n, a > b >= 0, d > c >= 0."""
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 2 - a):
            t = a * d - n
            if t < 0:
                continue
            if t == 0:
                out.extend((a, 0, c, d) for c in range(d))
                out.extend((a, b, 0, d) for b in range(1, a))
                continue
            for b in range(1, a):
                if t % b == 0 and t // b < d:
                    out.append((a, b, t // b, d))
    return tuple(out)


# ---------------------------------------------------------------------------
# Spaces
# ---------------------------------------------------------------------------

def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")


class _SignedUnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.sign = [1] * n
        self.zero = [False] * n

    def find(self, i: int) -> tuple[int, int]:
        s = 1
        path = []
        while self.parent[i] != i:
            path.append(i)
            s *= self.sign[i]
            i = self.parent[i]
        root = i
        # path compression keeping the accumulated sign
        acc = s
        for j in path:
            nxt_sign = self.sign[j]
            self.parent[j] = root
            self.sign[j] = acc
            acc *= nxt_sign
        return root, s

    def union(self, i: int, j: int, s: int) -> None:
        """Impose x_i = s * x_j."""
        ri, si = self.find(i)
        rj, sj = self.find(j)
        if ri == rj:
            if si != s * sj:
                self.zero[ri] = True
            return
        # x_ri = si x_i = si s x_j = si s sj x_rj
        self.parent[ri] = rj
        self.sign[ri] = si * s * sj
        if self.zero[ri]:
            self.zero[rj] = True


@dataclass
class ModularSymbolSpace:
    """Dual space Hom(M_2(Gamma_0(N))^sign, Q) with its presentation."""

    N: int
    sign: int
    p1: P1Index
    # x_i = class_sign[i] * y[class_var[i]] (class_var -1 means x_i = 0)
    class_var: list[int]
    class_sign: list[int]
    relations: list[list[int]]          # three-term relations in class variables
    basis: list[list[Fraction]]         # dual basis, full vectors over P^1
    free_symbols: list[int]             # P^1 indices dual to the basis
    _boundary: list[list[int]] | None = field(default=None, repr=False)
    _hecke_cache: dict = field(default_factory=dict, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    # -- Hecke -----------------------------------------------------------------
    def dual_hecke_matrix(self, q: int) -> list[list[Fraction]]:
        """Matrix of phi -> phi o T_q in the dual basis (columns = images)."""
        if self.N % q == 0:
            raise ValueError(f"q = {q} divides N; U_q is not supported")
        if not _is_prime(q):
            raise ValueError(f"{q} is not prime")
        if q in self._hecke_cache:
            return self._hecke_cache[q]
        d = self.dimension
        mats = merel_matrices(q)
        rows = []
        for f in self.free_symbols:
            c, dd = self.p1.representatives[f]
            row = [Fraction(0)] * d
            for (a, b, cc, e) in mats:
                j = self.p1.index(c * a + dd * cc, c * b + dd * e)
                for i in range(d):
                    v = self.basis[i][j]
                    if v:
                        row[i] += v
            rows.append(row)
        self._hecke_cache[q] = rows
        return rows

    def hecke_matrix(self, q: int) -> list[list[Fraction]]:
        """T_q on M_2^sign in the basis of free Manin symbols."""
        D = self.dual_hecke_matrix(q)
        return [list(col) for col in zip(*D)]

    # -- boundary / cuspidal part --------------------------------------------------
    def boundary_matrix(self) -> list[list[int]]:
        """Rows = cusp classes (in the sign quotient), columns = free symbols."""
        if self._boundary is not None:
            return self._boundary
        N = self.N
        cusps = CuspClasses(N)
        entries: list[list[tuple[int, int]]] = []
        for f in self.free_symbols:
            c, d = self.p1.representatives[f]
            a, b, c1, d1 = lift_to_sl2(c, d, N)
            entries.append([(cusps.index(a, c1), 1), (cusps.index(b, d1), -1)])
        # star involution on cusps: x -> -x
        base = len(cusps.reps)
        for i in range(base):
            a, c = cusps.reps[i]
            cusps.index(-a, c)
        n = len(cusps.reps)
        uf = _SignedUnionFind(n)
        for i in range(n):
            a, c = cusps.reps[i]
            j = cusps.index(-a, c)
            uf.union(i, j, self.sign)
        roots = sorted({uf.find(i)[0] for i in range(n)})
        pos = {r: k for k, r in enumerate(roots)}
        mat = [[0] * len(self.free_symbols) for _ in roots]
        for col, ents in enumerate(entries):
            for ci, coeff in ents:
                r, s = uf.find(ci)
                if uf.zero[r]:
                    continue
                mat[pos[r]][col] += coeff * s
        self._boundary = mat
        return mat

    def cuspidal_basis(self) -> list[list[Fraction]]:
        """Basis (free-symbol coordinates) of the cuspidal subspace S_2^sign."""
        basis, _ = _linalg.nullspace(self.boundary_matrix(), self.dimension)
        return basis

    @property
    def cuspidal_dimension(self) -> int:
        return self.dimension - _linalg.rank(self.boundary_matrix(), self.dimension)


def build_space(N: int, sign: int = 1) -> ModularSymbolSpace:
    """Presentation of weight-2 modular symbols for Gamma_0(N), sign quotient."""
    if not 1 <= N < MAX_LEVEL:
        raise ValueError(f"level {N} out of range [1, {MAX_LEVEL})")
    _check_sign(sign)
    p1 = P1Index(N)
    n = len(p1)
    reps = p1.representatives
    uf = _SignedUnionFind(n)
    for i, (c, d) in enumerate(reps):
        uf.union(i, p1.index(d, -c), -1)          # x + x sigma = 0
        uf.union(i, p1.index(-c, d), sign)        # x = sign * x^*
    roots = sorted({uf.find(i)[0] for i in range(n) if not uf.zero[uf.find(i)[0]]})
    pos = {r: k for k, r in enumerate(roots)}
    class_var, class_sign = [], []
    for i in range(n):
        r, s = uf.find(i)
        if uf.zero[r]:
            class_var.append(-1)
            class_sign.append(0)
        else:
            class_var.append(pos[r])
            class_sign.append(s)
    nvar = len(roots)
    relations = []
    seen = set()
    for i, (c, d) in enumerate(reps):
        trio = (i, p1.index(d, -c - d), p1.index(-c - d, c))
        key = tuple(sorted(trio))
        if key in seen:
            continue
        seen.add(key)
        row = [0] * nvar
        for j in trio:
            if class_var[j] >= 0:
                row[class_var[j]] += class_sign[j]
        if any(row):
            relations.append(row)
    small_basis, free_vars = _linalg.nullspace(relations, nvar)
    basis = []
    for vec in small_basis:
        basis.append([Fraction(class_sign[i]) * vec[class_var[i]] if class_var[i] >= 0 else Fraction(0)
                      for i in range(n)])
    free_symbols = [roots[v] for v in free_vars]
    return ModularSymbolSpace(N, sign, p1, class_var, class_sign, relations, basis, free_symbols)


def hecke_operator(space: ModularSymbolSpace, q: int) -> list[list[Fraction]]:
    """Matrix of T_q on the cuspidal subspace (basis from ``cuspidal_basis``)."""
    T = space.hecke_matrix(q)
    cb = space.cuspidal_basis()
    out_cols = []
    for v in cb:
        img = [sum(T[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
        out_cols.append(_linalg.solve(cb, img))
    return [list(r) for r in zip(*out_cols)] if out_cols else []


# ---------------------------------------------------------------------------
# Eigensymbols
# ---------------------------------------------------------------------------

class EigenspaceError(ValueError):
    pass


@dataclass
class EigenSymbol:
    """Primitive integral Hecke eigen-homomorphism on modular symbols.

    ``values[i]`` is the value on the Manin symbol ``p1.representatives[i]``.
    """

    N: int
    sign: int
    p1: P1Index
    values: list[int]
    eigenvalues: dict[int, int]
    fricke_sign: int = 0
    weight: int = 2

    def symbol_value(self, c: int, d: int) -> int:
        return self.values[self.p1.index(c, d)]

    def eval_path(self, r, method: str = "floor") -> Fraction:
        """Value on the path {r, oo}; ``r`` may be ``None`` for oo."""
        if r is None:
            return Fraction(0)
        r = Fraction(r)
        total = 0
        for c, d in unimodular_steps(r, method):
            total -= self.symbol_value(c, d)
        return Fraction(total)

    def eval_segment(self, r, s) -> Fraction:
        """Value on {r, s}."""
        return self.eval_path(r) - self.eval_path(s)

    def scaled(self, c: int) -> "EigenSymbol":
        return EigenSymbol(self.N, self.sign, self.p1, [c * v for v in self.values],
                           dict(self.eigenvalues), self.fricke_sign)

    @classmethod
    def zero(cls, N: int, sign: int = 1) -> "EigenSymbol":
        p1 = P1Index(N)
        return cls(N, sign, p1, [0] * len(p1), {}, 1)

    def is_zero(self) -> bool:
        return not any(self.values)


def _primitive(vec: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    return [-x for x in ints] if first < 0 else ints


def eigensymbol(space: ModularSymbolSpace, eigenvalues: Mapping[int, int],
                sign: int | None = None) -> EigenSymbol:
    """The normalized eigensymbol cut out by ``eigenvalues`` (q -> a_q)."""
    if sign is not None and sign != space.sign:
        raise ValueError("sign does not match the space")
    if not eigenvalues:
        raise EigenspaceError("no eigenvalues given")
    d = space.dimension
    rows = []
    for q, aq in sorted(eigenvalues.items()):
        D = space.dual_hecke_matrix(q)
        for i in range(d):
            rows.append([D[i][j] - (aq if i == j else 0) for j in range(d)])
    null, _ = _linalg.nullspace(rows, d)
    if not null:
        raise EigenspaceError("empty eigenspace")
    if len(null) > 1:
        raise EigenspaceError(f"eigenspace has dimension {len(null)}; add more eigenvalues")
    coeffs = null[0]
    full = [sum(c * b[i] for c, b in zip(coeffs, space.basis)) for i in range(len(space.p1))]
    values = _primitive(full)
    sym = EigenSymbol(space.N, space.sign, space.p1, values, dict(eigenvalues))
    sym.fricke_sign = fricke_sign(sym)
    return sym


def _fricke_image(r: Fraction | None, N: int) -> Fraction | None:
    if r is None:
        return Fraction(0)
    if r == 0:
        return None
    return Fraction(-1) / (N * r)


def fricke_sign(symbol: EigenSymbol) -> int:
    """w with phi({W x, W y}) = w phi({x, y}), W = [[0, -1], [N, 0]]."""
    N = symbol.N
    ratio = None
    for (c, d), v in zip(symbol.p1.representatives, symbol.values):
        a, b, c1, d1 = lift_to_sl2(c, d, N)
        x = Fraction(b, d1) if d1 else None
        y = Fraction(a, c1) if c1 else None
        image = symbol.eval_path(_fricke_image(x, N)) - symbol.eval_path(_fricke_image(y, N))
        if v == 0:
            if image != 0:
                raise EigenspaceError("symbol is not a Fricke eigenvector")
            continue
        w = image / v
        if ratio is None:
            ratio = w
        elif w != ratio:
            raise EigenspaceError("symbol is not a Fricke eigenvector")
    if ratio is None:
        return 1
    if ratio not in (1, -1):
        raise EigenspaceError(f"Fricke eigenvalue {ratio} is not +-1")
    return int(ratio)


def hecke_relation_defect(symbol: EigenSymbol, p: int, a: int, n: int) -> Fraction:
    """sum_b phi((a + b p^n)/p^(n+1)) + phi(a/p^(n-1)) - a_p phi(a/p^n)."""
    ap = symbol.eigenvalues[p]
    lhs = sum(symbol.eval_path(Fraction(a + b * p ** n, p ** (n + 1))) for b in range(p))
    prev = Fraction(a * p, p ** n) if n >= 1 else Fraction(a * p)
    return lhs + symbol.eval_path(prev) - ap * symbol.eval_path(Fraction(a, p ** n))


# ---------------------------------------------------------------------------
# On-disk cache
# ---------------------------------------------------------------------------

CACHE_HEADER = "PADICLF-MODSYM v1"


class CacheFormatError(ValueError):
    pass


def _fr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _eigen_key(eigenvalues: Mapping[int, int]) -> str:
    return ",".join(f"{q}={v}" for q, v in sorted(eigenvalues.items()))


def dump_space(space: ModularSymbolSpace, symbols: Sequence[EigenSymbol] = ()) -> str:
    """Canonical text form of a space and any eigensymbols found in it."""
    lines = [f"{CACHE_HEADER}; N={space.N}; sign={space.sign}",
             "p1 " + " ".join(f"{c}:{d}" for c, d in space.p1.representatives),
             "classes " + " ".join(f"{v}:{s}" for v, s in zip(space.class_var, space.class_sign)),
             "free " + " ".join(map(str, space.free_symbols))]
    for vec in space.basis:
        lines.append("basis " + " ".join(_fr(x) for x in vec))
    for sym in sorted(symbols, key=lambda s: _eigen_key(s.eigenvalues)):
        lines.append(f"eigen {_eigen_key(sym.eigenvalues)} w={sym.fricke_sign} "
                     + " ".join(map(str, sym.values)))
    return "\n".join(lines) + "\n"


def load_space(text: str) -> tuple[ModularSymbolSpace, list[EigenSymbol]]:
    rows = text.splitlines()
    if not rows or not rows[0].startswith(CACHE_HEADER + ";"):
        raise CacheFormatError("missing or outdated cache header")
    try:
        fields = dict(f.strip().split("=") for f in rows[0].split(";")[1:])
        N, sign = int(fields["N"]), int(fields["sign"])
        p1 = P1Index(N)
        reps = [tuple(map(int, t.split(":"))) for t in rows[1].split()[1:]]
        if rows[1].split()[0] != "p1" or reps != p1.representatives:
            raise CacheFormatError("P^1 table does not match")
        pairs = [t.split(":") for t in rows[2].split()[1:]]
        class_var = [int(a) for a, _ in pairs]
        class_sign = [int(b) for _, b in pairs]
        free = [int(t) for t in rows[3].split()[1:]]
        basis, symbols = [], []
        for row in rows[4:]:
            tag, _, rest = row.partition(" ")
            if tag == "basis":
                basis.append([Fraction(t) for t in rest.split()])
            elif tag == "eigen":
                key, w, *vals = rest.split()
                ev = {int(a): int(b) for a, b in (kv.split("=") for kv in key.split(","))}
                symbols.append(EigenSymbol(N, sign, p1, [int(v) for v in vals], ev,
                                           int(w.split("=")[1])))
            elif row.strip():
                raise CacheFormatError(f"unknown line tag {tag!r}")
    except (KeyError, ValueError, IndexError) as exc:
        if isinstance(exc, CacheFormatError):
            raise
        raise CacheFormatError(f"corrupt cache: {exc}") from None
    space = ModularSymbolSpace(N, sign, p1, class_var, class_sign, [], basis, free)
    return space, symbols


class SymbolCache:
    """Directory of per-(N, sign) cache files, written atomically."""

    def __init__(self, directory):
        self.directory = os.fspath(directory)
        os.makedirs(self.directory, exist_ok=True)

    def path(self, N: int, sign: int) -> str:
        return os.path.join(self.directory, f"modsym_N{N}_{'plus' if sign == 1 else 'minus'}.txt")

    def _read(self, N: int, sign: int):
        try:
            with open(self.path(N, sign), encoding="utf-8") as fh:
                return load_space(fh.read())
        except FileNotFoundError:
            return None
        except CacheFormatError:
            return None  # stale or damaged: rebuild

    def _write(self, space: ModularSymbolSpace, symbols: Sequence[EigenSymbol]) -> None:
        target = self.path(space.N, space.sign)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-modsym-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(dump_space(space, symbols))
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def space(self, N: int, sign: int = 1) -> ModularSymbolSpace:
        hit = self._read(N, sign)
        if hit is not None:
            return hit[0]
        space = build_space(N, sign)
        self._write(space, [])
        return space

    def eigensymbol(self, N: int, eigenvalues: Mapping[int, int], sign: int = 1) -> EigenSymbol:
        hit = self._read(N, sign)
        key = _eigen_key(eigenvalues)
        if hit is not None:
            space, symbols = hit
            for sym in symbols:
                if _eigen_key(sym.eigenvalues) == key:
                    return sym
        else:
            space, symbols = build_space(N, sign), []
        sym = eigensymbol(space, eigenvalues)
        self._write(space, list(symbols) + [sym])
        return sym
