"""Floating-point oracles: traces of Frobenius, L(E, 1) and the real period.

Nothing here feeds the exact pipeline.  These numbers exist so that tests
can compare the modular-symbol side against independent computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .modsym import _is_prime, _prime_divisors


@dataclass(frozen=True)
class CurveData:
    """Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int | None = None

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError("singular Weierstrass model")
        if self.conductor is not None:
            if self.conductor < 1:
                raise ValueError("conductor must be positive")
            bad = set(_prime_divisors(abs(self.discriminant)))
            if not set(_prime_divisors(self.conductor)) <= bad:
                raise ValueError("conductor has a prime of good reduction")

    @classmethod
    def from_list(cls, coeffs: Sequence[int], conductor: int | None = None) -> "CurveData":
        if len(coeffs) != 5:
            raise ValueError("expected five coefficients a1, a2, a3, a4, a6")
        return cls(*(int(c) for c in coeffs), conductor=conductor)

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return self.a1, self.a2, self.a3, self.a4, self.a6

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def bad_primes(self) -> list[int]:
        return _prime_divisors(abs(self.discriminant))


def count_points(curve: CurveData, q: int) -> int:
    """#E(F_q) for the reduction of the model, singular point included."""
    a1, a2, a3, a4, a6 = (c % q for c in curve.coefficients)
    if q == 2:
        affine = sum(1 for x in range(2) for y in range(2)
                     if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0)
        return affine + 1
    x = np.arange(q, dtype=np.int64)
    # (2y + a1 x + a3)^2 = 4 x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6 = (a1 * a1 + 4 * a2) % q, (2 * a4 + a1 * a3) % q, (a3 * a3 + 4 * a6) % q
    rhs = (((4 * x + b2) % q * x % q + 2 * b4) % q * x % q + b6) % q
    sq = np.zeros(q, dtype=np.int64)
    np.add.at(sq, (x * x) % q, 1)
    return int(sq[rhs].sum()) + 1


def _trace(curve: CurveData, q: int) -> int:
    return q + 1 - count_points(curve, q)


def a_p(curve: CurveData, q: int) -> int:
    """Trace of Frobenius q + 1 - #E(F_q) at a prime of good reduction."""
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q >= 10 ** 5:
        raise ValueError("q is beyond desk scale")
    if curve.discriminant % q == 0:
        raise ValueError(f"{q} is a prime of bad reduction")
    t = _trace(curve, q)
    assert t * t <= 4 * q, f"Hasse bound violated at q={q}: a_q={t}"
    return t


def an_coefficients(curve: CurveData, n_max: int) -> list[int]:
    """a_1..a_n_max of L(E, s) (index 0 unused); the model must be minimal."""
    a = [0] * (n_max + 1)
    if n_max >= 1:
        a[1] = 1
    disc = curve.discriminant
    spf = list(range(n_max + 1))
    for i in range(2, math.isqrt(n_max) + 1):
        if spf[i] == i:
            for j in range(i * i, n_max + 1, i):
                if spf[j] == j:
                    spf[j] = i
    traces: dict[int, int] = {}
    for n in range(2, n_max + 1):
        q = spf[n]
        m, e = n, 0
        while m % q == 0:
            m //= q
            e += 1
        if m > 1:
            a[n] = a[m] * a[n // m]
            continue
        if q not in traces:
            traces[q] = _trace(curve, q)
        t = traces[q]
        if e == 1:
            a[n] = t
        elif disc % q == 0:
            a[n] = t * a[n // q]
        else:
            a[n] = t * a[n // q] - q * a[n // (q * q)]
    return a


class NumericValue(NamedTuple):
    value: float
    error: float


def l_value_numeric(curve: CurveData, terms: int = 2000, root_number: int = 1,
                    scale: float = 1.0) -> NumericValue:
    """L(E, 1) from the exponential sum attached to the functional equation.

    With ``scale = A`` the series is
    sum a_n/n (exp(-2 pi n A/sqrt N) + eps exp(-2 pi n/(A sqrt N))); for
    A = 1 this is (1 + eps) sum a_n/n exp(-2 pi n/sqrt N).
    """
    if terms < 1000:
        raise ValueError("use at least 1000 terms")
    if curve.conductor is None:
        raise ValueError("the conductor is needed")
    if root_number not in (1, -1):
        raise ValueError("root number must be +-1")
    N = curve.conductor
    a = np.array(an_coefficients(curve, terms)[1:], dtype=float)
    n = np.arange(1, terms + 1, dtype=float)
    c1 = 2 * math.pi * scale / math.sqrt(N)
    c2 = 2 * math.pi / (scale * math.sqrt(N))
    total = float(np.sum(a / n * (np.exp(-c1 * n) + root_number * np.exp(-c2 * n))))
    # |a_n| <= n, so each tail is bounded by a geometric series
    tail = sum(math.exp(-c * (terms + 1)) / -math.expm1(-c) for c in (c1, c2))
    return NumericValue(total, tail)


def agm(a: float, b: float, tol: float = 1e-15, max_iter: int = 100) -> float:
    """Arithmetic-geometric mean of two positive reals."""
    if a <= 0 or b <= 0:
        raise ValueError("AGM needs positive arguments")
    for _ in range(max_iter):
        if abs(a - b) <= tol * a:
            return a
        a, b = (a + b) / 2, math.sqrt(a * b)
    raise ArithmeticError("AGM did not converge")


def real_period(curve: CurveData) -> float:
    """Omega^+ = integral of |dx/(2y + a1 x + a3)| over E(R)."""
    b2, b4, b6, _ = curve.b_invariants
    roots = np.roots([4, b2, 2 * b4, b6])
    if curve.discriminant > 0:
        e1, e2, e3 = sorted((float(r.real) for r in roots), reverse=True)
        if not e1 > e2 > e3:
            raise ArithmeticError("real roots were not separated")
        return 2 * math.pi / agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
    real = [r for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r))]
    if len(real) != 1:
        raise ArithmeticError("expected exactly one real root")
    e1 = float(real[0].real)
    z = complex(np.sqrt(complex(e1 - roots[np.argmax(roots.imag)])))
    # AGM(z, conj z): one step lands on the reals
    return math.pi / agm(z.real, abs(z))
