"""Capped-precision p-adic numbers in Q_p and in Q_p(pi), pi^2 = -p.

An element is stored as ``p**shift * (unit + wild * pi)`` together with an
absolute precision counted in powers of the uniformizer (``p`` when the
ramification index is 1, ``pi`` when it is 2).  Python ``int`` and
``Fraction`` operands are treated as exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Union

Rational = Union[int, Fraction]

# precision attached to exact zeros (never materialized as a modulus)
EXACT = 10**9


class PrecisionError(ArithmeticError):
    """Raised when a computation cannot deliver the requested precision."""


def valuation(n: Rational, p: int) -> float | int:
    """p-adic valuation of an integer or fraction; ``math.inf`` for zero."""
    if n == 0:
        return math.inf
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    n = abs(int(n))
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, math.isqrt(p) + 1, 2)):
        raise ValueError(f"expected an odd prime, got {p}")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class PadicNumber:
    """Element of Q_p (``ram=1``) or of the ramified extension Q_p(sqrt(-p)).

    ``precision`` is measured in uniformizer units; ``abs_precision`` gives
    the same bound in units of v_p (so it is a half-integer when ``ram=2``).
    A value that is zero modulo its precision is the tracked zero.
    """

    __slots__ = ("p", "ram", "unit", "wild", "shift", "precision")

    def __init__(self, p: int, unit: int, wild: int = 0, shift: int = 0, *,
                 precision: int, ram: int = 1):
        if ram not in (1, 2):
            raise ValueError("ramification must be 1 or 2")
        if ram == 1 and wild:
            raise ValueError("unramified element cannot carry a pi component")
        self.p = p
        self.ram = ram
        self.precision = precision
        self.unit, self.wild, self.shift = self._normalize(unit, wild, shift)

    # -- construction -----------------------------------------------------
    def _normalize(self, u: int, w: int, sh: int) -> tuple[int, int, int]:
        p, n = self.p, self.precision
        if u == 0 and w == 0:
            return 0, 0, 0
        if self.ram == 1:
            mu = max(0, n - sh)
            u %= p ** mu
            w = 0
        else:
            mu = max(0, _ceil_div(n - 2 * sh, 2))
            mw = max(0, _ceil_div(n - 1 - 2 * sh, 2))
            u %= p ** mu
            w %= p ** mw
        if u == 0 and w == 0:
            return 0, 0, 0
        while u % p == 0 and w % p == 0:
            u //= p
            w //= p
            sh += 1
        # a unit part kept symmetric would break bit-exact comparisons
        if self.ram == 1:
            u %= p ** (n - sh)
        else:
            u %= p ** max(0, _ceil_div(n - 2 * sh, 2))
            w %= p ** max(0, _ceil_div(n - 1 - 2 * sh, 2))
        return u, w, sh

    @classmethod
    def from_rational(cls, x: Rational, p: int, prec: Rational, ram: int = 1) -> "PadicNumber":
        """Embed an exact rational, known modulo ``p**prec``."""
        x = Fraction(x)
        n = math.floor(Fraction(prec) * ram)
        if x == 0:
            return cls(p, 0, precision=n, ram=ram)
        num, den = x.numerator, x.denominator
        vd = valuation(den, p)
        den //= p ** vd
        vn = valuation(num, p)
        num //= p ** vn
        sh = vn - vd
        rel = max(1, _ceil_div(n, ram) - sh + 1)
        mod = p ** rel
        u = num * pow(den, -1, mod) % mod
        return cls(p, u, 0, sh, precision=n, ram=ram)

    @classmethod
    def zero(cls, p: int, prec: Rational, ram: int = 1) -> "PadicNumber":
        return cls(p, 0, precision=math.floor(Fraction(prec) * ram), ram=ram)

    @classmethod
    def uniformizer(cls, p: int, prec: Rational) -> "PadicNumber":
        """The element pi with pi**2 = -p."""
        return cls(p, 0, 1, 0, precision=math.floor(Fraction(prec) * 2), ram=2)

    # -- basic attributes ---------------------------------------------------
    def is_zero(self) -> bool:
        """True when the value is consistent with zero at its precision."""
        return self.unit == 0 and self.wild == 0

    def provably_nonzero(self) -> bool:
        return not self.is_zero()

    def _val_units(self) -> float | int:
        if self.is_zero():
            return math.inf
        if self.ram == 1:
            return self.shift
        return 2 * self.shift + (0 if self.unit % self.p else 1)

    @property
    def valuation(self) -> Fraction | float:
        v = self._val_units()
        return v if v == math.inf else Fraction(v, self.ram)

    @property
    def abs_precision(self) -> Fraction:
        return Fraction(self.precision, self.ram)

    @property
    def relative_precision(self) -> Fraction | float:
        if self.is_zero():
            return 0
        return self.abs_precision - self.valuation

    def valuation_lower_bound(self) -> Fraction:
        """Certified lower bound on the true valuation."""
        return self.abs_precision if self.is_zero() else self.valuation

    def unit_digits(self) -> list[int]:
        """Uniformizer-adic digits of ``self / uniformizer**valuation``."""
        if self.is_zero():
            return []
        p = self.p
        count = self.precision - self._val_units()
        digits = []
        if self.ram == 1:
            u = self.unit
            for _ in range(count):
                digits.append(u % p)
                u //= p
            return digits
        u, w = self.unit, self.wild
        if self.shift % 2:
            # p = -pi^2, so p^shift and pi^(2 shift) differ by a sign
            u, w = -u, -w
        if u % p == 0:
            # leading term is w*pi: divide by pi once
            u, w = w, -(u // p)
        for _ in range(count):
            d = u % p
            digits.append(d)
            u, w = w, -((u - d) // p)
        return digits

    def lift(self) -> Fraction:
        """A rational representative (only for ``ram=1``)."""
        if self.ram != 1:
            raise ValueError("lift() needs an element of Q_p")
        return Fraction(self.unit) * Fraction(self.p) ** self.shift

    def residue_integer(self) -> int:
        """Integer representative of an element of Z_p."""
        r = self.lift()
        if r.denominator != 1:
            raise ValueError("element is not p-integral")
        return int(r)

    def add_bigoh(self, prec: Rational) -> "PadicNumber":
        """Reduce precision to ``min(current, prec)`` (prec in v_p units)."""
        n = min(self.precision, math.floor(Fraction(prec) * self.ram))
        return PadicNumber(self.p, self.unit, self.wild, self.shift, precision=n, ram=self.ram)

    def with_ram(self, ram: int) -> "PadicNumber":
        if ram == self.ram:
            return self
        if self.ram == 2:
            raise ValueError("cannot restrict a ramified element to Q_p")
        return PadicNumber(self.p, self.unit, 0, self.shift, precision=2 * self.precision, ram=2)

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber | None":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return None
        return NotImplemented

    def _exact(self, x: Rational, n: int) -> "PadicNumber":
        return PadicNumber.from_rational(x, self.p, Fraction(n, self.ram), self.ram)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            if other == 0:
                return self
            o = self._exact(other, self.precision)
        a, b = self, o
        if a.ram != b.ram:
            a, b = a.with_ram(2), b.with_ram(2)
        n = min(a.precision, b.precision)
        if a.is_zero():
            return PadicNumber(a.p, b.unit, b.wild, b.shift, precision=n, ram=a.ram)
        if b.is_zero():
            return PadicNumber(a.p, a.unit, a.wild, a.shift, precision=n, ram=a.ram)
        sh = min(a.shift, b.shift)
        fa, fb = a.p ** (a.shift - sh), a.p ** (b.shift - sh)
        return PadicNumber(a.p, a.unit * fa + b.unit * fb, a.wild * fa + b.wild * fb, sh,
                           precision=n, ram=a.ram)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.p, -self.unit, -self.wild, self.shift,
                           precision=self.precision, ram=self.ram)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            x = Fraction(other)
            if x == 0:
                return PadicNumber(self.p, 0, precision=EXACT, ram=self.ram)
            v = valuation(x, self.p)
            unit = x / Fraction(self.p) ** v
            n = self.precision + v * self.ram
            if self.is_zero():
                return PadicNumber(self.p, 0, precision=n, ram=self.ram)
            rel = _ceil_div(self.precision, self.ram) - self.shift + 2
            mod = self.p ** max(1, rel)
            c = unit.numerator * pow(unit.denominator, -1, mod) % mod
            return PadicNumber(self.p, self.unit * c, self.wild * c, self.shift + v,
                               precision=n, ram=self.ram)
        a, b = self, o
        if a.ram != b.ram:
            a, b = a.with_ram(2), b.with_ram(2)
        va = a._val_units() if not a.is_zero() else a.precision
        vb = b._val_units() if not b.is_zero() else b.precision
        n = min(va + b.precision, vb + a.precision)
        if a.is_zero() or b.is_zero():
            return PadicNumber(a.p, 0, precision=n, ram=a.ram)
        p = a.p
        u = a.unit * b.unit - p * a.wild * b.wild
        w = a.unit * b.wild + a.wild * b.unit
        return PadicNumber(p, u, w, a.shift + b.shift, precision=n, ram=a.ram)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of a p-adic number consistent with zero")
        p, v = self.p, self._val_units()
        n_new = self.precision - 2 * v
        rel = _ceil_div(self.precision - v, self.ram) + 2
        mod = p ** rel
        u, w = self.unit, self.wild
        norm = u * u + p * w * w
        t = 0
        while norm % p == 0:
            norm //= p
            t += 1
        inv = pow(norm, -1, mod)
        return PadicNumber(p, u * inv, -w * inv, -self.shift - t, precision=n_new, ram=self.ram)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, PadicNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return PadicNumber(self.p, 1, precision=max(self.precision, 1), ram=self.ram)
        base = self
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparisons -----------------------------------------------------------
    def _key(self):
        return (self.p, self.ram, self.precision, self.unit, self.wild, self.shift)

    def __eq__(self, other):
        """Bit-exact equality: same value, same precision."""
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def agrees_with(self, other, prec: Rational | None = None) -> bool:
        """True if the difference is consistent with zero (at ``prec`` if given)."""
        d = self - other
        if prec is not None:
            d = d.add_bigoh(prec)
        return d.is_zero()

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.abs_precision})"
        if self.ram == 1:
            return f"{self.p}^{self.shift}*{self.unit} + O({self.p}^{self.abs_precision})"
        return (f"{self.p}^{self.shift}*({self.unit} + {self.wild}*pi) "
                f"+ O({self.p}^{self.abs_precision})")


def padic(x: Rational, p: int, prec: Rational, ram: int = 1) -> PadicNumber:
    """Shorthand for :meth:`PadicNumber.from_rational`."""
    return PadicNumber.from_rational(x, p, prec, ram)


# ---------------------------------------------------------------------------
# Teichmuller decomposition
# ---------------------------------------------------------------------------

def teichmuller(a: int, p: int, n: int) -> PadicNumber:
    """The (p-1)-th root of unity congruent to ``a`` mod p, to precision n."""
    if p == 2:
        raise ValueError("p = 2 is not supported")
    _check_odd_prime(p)
    if a % p == 0:
        raise ValueError(f"{a} is not a unit mod {p}")
    if n < 1:
        raise ValueError("precision must be positive")
    mod = p ** n
    x = a % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PadicNumber(p, x, precision=n)
        x = y


def _unit_integer(x: PadicNumber | int, p: int) -> tuple[int, int]:
    """Integer representative and precision (None for exact ints)."""
    if isinstance(x, PadicNumber):
        if x.ram != 1 or x.is_zero() or x.shift != 0:
            raise ValueError("expected a unit of Z_p")
        return x.unit, x.precision
    if x % p == 0:
        raise ValueError("expected a unit of Z_p")
    return int(x), None


def angle_part(x: PadicNumber) -> PadicNumber:
    """<x> = x / omega(x), the principal-unit part of a unit of Z_p."""
    u, n = _unit_integer(x, x.p)
    return x * teichmuller(u, x.p, n).inverse()


def angle_int(a: int, p: int, n: int) -> int:
    """<a> mod p**n as an integer, for an integer unit ``a``."""
    mod = p ** n
    w = teichmuller(a, p, n).unit
    return a * pow(w, -1, mod) % mod


# ---------------------------------------------------------------------------
# Hecke polynomial roots
# ---------------------------------------------------------------------------

class HeckeRoot(NamedTuple):
    root: PadicNumber
    admissible: bool
    label: str  # 'unit', 'nonunit', 'plus' or 'minus'


def _hensel_unit_root(ap: int, pk1: int, p: int, prec: int) -> int:
    # Newton iteration with doubling precision on X^2 - ap X + pk1
    x = ap % p
    cur = 1
    while cur < prec:
        cur = min(2 * cur, prec)
        mod = p ** cur
        f = (x * x - ap * x + pk1) % mod
        df = (2 * x - ap) % mod
        x = (x - f * pow(df, -1, mod)) % mod
    return x


def hecke_roots(ap: int, k: int, p: int, prec: int, level: int | None = None) -> list[HeckeRoot]:
    """Roots of X^2 - ap X + p^(k-1) with admissibility flags.

    Ordinary primes give the Hensel-lifted unit root first.  For ``ap = 0``
    and ``k = 2`` the roots are +-pi in Q_p(pi), pi^2 = -p.
    """
    _check_odd_prime(p)
    if k < 2 or k % 2:
        raise ValueError("weight must be an even integer >= 2")
    if level is not None and level % p == 0:
        raise ValueError("p divides N")
    pk1 = p ** (k - 1)
    if ap * ap > 4 * pk1:
        raise ValueError(f"a_p = {ap} violates the Ramanujan-Petersson bound")
    if ap % p:
        a = _hensel_unit_root(ap, pk1, p, prec)
        alpha = PadicNumber(p, a, precision=prec)
        beta = alpha.inverse() * pk1
        # p^(1-k) < |x| <= 1  <=>  0 <= v(x) < k - 1
        return [HeckeRoot(alpha, True, "unit"),
                HeckeRoot(beta, bool(beta.valuation < k - 1), "nonunit")]
    if ap != 0 or k != 2:
        raise NotImplementedError("supersingular roots are only supported for a_p = 0, k = 2")
    pi = PadicNumber.uniformizer(p, prec)
    return [HeckeRoot(pi, True, "plus"), HeckeRoot(-pi, True, "minus")]


# ---------------------------------------------------------------------------
# Factorials and binomial series
# ---------------------------------------------------------------------------

def digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        s += n % p
        n //= p
    return s


def factorial_valuation(n: int, p: int) -> int:
    """v_p(n!) = (n - sigma_n) / (p - 1), sigma_n the base-p digit sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (n - digit_sum(n, p)) // (p - 1)


def p_power_over_factorial_valuation(k: int, p: int) -> int:
    """v_p(p^k / k!) = ((p-2)k + sigma_k) / (p-1)."""
    return ((p - 2) * k + digit_sum(k, p)) // (p - 1)


def binomial_tail_floor(terms: int, p: int) -> int:
    """Lower bound for v(C(x, k) p^k) over all k >= terms, x in Z_p."""
    return _ceil_div((p - 2) * terms + 1, p - 1)


def binomial_coefficients(x: PadicNumber | int, terms: int, p: int, prec: int) -> list[PadicNumber]:
    """[C(x, k) * p^k for k < terms], for x in Z_p.

    Exact integers are handled with exact arithmetic; the results are then
    rounded to ``prec``.
    """
    out = []
    if isinstance(x, int):
        c = Fraction(1)
        for k in range(terms):
            if k:
                c = c * (x - k + 1) / k
            out.append(PadicNumber.from_rational(c * p ** k, p, prec))
        return out
    c = PadicNumber.from_rational(1, p, prec + terms)
    for k in range(terms):
        if k:
            c = c * (x - (k - 1)) * Fraction(p, k)
        out.append(c.add_bigoh(prec))
    return out


def binomial_series_power(a: PadicNumber | int, s_minus_1: PadicNumber | int, terms: int,
                          prec: int | None = None) -> PadicNumber:
    """<a>^(s-1) = sum_k C(s-1, k) p^k a~^k with a~ = (<a> - 1)/p.

    The returned precision is capped by the tail bound
    ``ceil(((p-2) terms + 1)/(p-1))``.
    """
    if isinstance(a, PadicNumber):
        p = a.p
        if prec is None:
            prec = a.precision
    elif isinstance(s_minus_1, PadicNumber):
        p = s_minus_1.p
        if prec is None:
            prec = s_minus_1.precision
    else:
        raise ValueError("need a PadicNumber argument to fix the prime")
    if p < 3:
        raise ValueError("p must be at least 3")
    if terms < 1:
        raise ValueError("terms must be positive")
    au = a.unit if isinstance(a, PadicNumber) else a
    if isinstance(a, PadicNumber):
        _unit_integer(a, p)
        prec = min(prec, a.precision)
    tail = binomial_tail_floor(terms, p)
    work = prec + 2
    x_int = angle_int(au, p, work + 1)
    tilde = (x_int - 1) // p
    coeffs = binomial_coefficients(s_minus_1, terms, p, work)
    total = PadicNumber.zero(p, work)
    power = 1
    mod = p ** work
    for c in coeffs:
        total = total + c * power
        power = power * tilde % mod
    return total.add_bigoh(min(prec, tail))


# ---------------------------------------------------------------------------
# Exact elements of Q(alpha), alpha^2 = a_p alpha - p^(k-1)
# ---------------------------------------------------------------------------

class AlphaContext(NamedTuple):
    ap: int
    k: int
    p: int

    @property
    def norm(self) -> int:
        return self.p ** (self.k - 1)


class AlphaElement:
    """a + b*alpha with rational a, b, alpha a root of X^2 - a_p X + p^(k-1)."""

    __slots__ = ("a", "b", "ctx")

    def __init__(self, a: Rational, b: Rational, ctx: AlphaContext):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.ctx = ctx

    @classmethod
    def generator(cls, ctx: AlphaContext) -> "AlphaElement":
        return cls(0, 1, ctx)

    @classmethod
    def rational(cls, x: Rational, ctx: AlphaContext) -> "AlphaElement":
        return cls(x, 0, ctx)

    def _lift(self, other) -> "AlphaElement":
        if isinstance(other, AlphaElement):
            if other.ctx != self.ctx:
                raise ValueError("mixing different Hecke polynomials")
            return other
        if isinstance(other, (int, Fraction)):
            return AlphaElement(other, 0, self.ctx)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlphaElement(self.a + o.a, self.b + o.b, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return AlphaElement(-self.a, -self.b, self.ctx)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        ap, q = self.ctx.ap, self.ctx.norm
        bb = self.b * o.b
        # alpha^2 = ap*alpha - q
        return AlphaElement(self.a * o.a - q * bb, self.a * o.b + self.b * o.a + ap * bb, self.ctx)

    __rmul__ = __mul__

    def conjugate(self) -> "AlphaElement":
        # alpha' = ap - alpha
        return AlphaElement(self.a + self.b * self.ctx.ap, -self.b, self.ctx)

    def norm(self) -> Fraction:
        return (self * self.conjugate()).a

    def inverse(self) -> "AlphaElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("AlphaElement is not invertible")
        c = self.conjugate()
        return AlphaElement(c.a / n, c.b / n, self.ctx)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = AlphaElement(1, 0, self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, AlphaElement):
            return NotImplemented
        return self.ctx == other.ctx and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.ctx))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def embed(self, root: PadicNumber) -> PadicNumber:
        """Image under alpha -> root."""
        p = self.ctx.p
        prec = root.abs_precision
        return (PadicNumber.from_rational(self.a, p, prec, root.ram)
                + root * self.b)

    def p_valuation(self, root: PadicNumber) -> Fraction | float:
        return self.embed(root).valuation

    def __repr__(self):
        return f"({self.a} + {self.b}*alpha)"
