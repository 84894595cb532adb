import random
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from padiclf import _linalg
from padiclf.modsym import (CACHE_HEADER, CacheFormatError, CuspClasses, EigenspaceError,
                            P1Index, SymbolCache, build_space, cusp_count, dump_space, eigensymbol,
                            floor_cf, hecke_operator, hecke_relation_defect, lift_to_sl2,
                            load_space, merel_matrices, nearest_cf, unimodular_steps)

from conftest import EV_11A1, EV_37A1, EV_37B1


def genus_x0(N):
    """Oracle: genus of X_0(N) from the classical formula."""
    ps = sympy.primefactors(N)
    mu = N
    for p in ps:
        mu = mu * (p + 1) // p
    nu2 = 0 if N % 4 == 0 else int(sympy.prod([1 + sympy.legendre_symbol(-1, p) if p > 2 else 1
                                                for p in ps]))
    nu3 = 0 if N % 9 == 0 else int(sympy.prod([1 + sympy.legendre_symbol(-3, p) if p != 3 else 1
                                                for p in ps]))
    cusps = sum(sympy.totient(gcd(d, N // d)) for d in sympy.divisors(N))
    return 1 + Fraction(mu, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(cusps, 2)


# -- linear algebra -------------------------------------------------------------

def test_nullspace_against_sympy():
    rng = random.Random(3)
    for _ in range(20):
        rows = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(4)]
        basis, _ = _linalg.nullspace(rows, 6)
        assert len(basis) == 6 - sympy.Matrix(rows).rank()
        for v in basis:
            assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_solve_and_errors():
    cols = [[1, 0, 1], [0, 1, 1]]
    assert _linalg.solve(cols, [2, 3, 5]) == [2, 3]
    with pytest.raises(ValueError):
        _linalg.solve(cols, [1, 1, 0])


def test_unitriangular_inverse_against_sympy():
    m = [[1, 2, -3], [0, 1, 4], [0, 0, 1]]
    inv = _linalg.upper_unitriangular_inverse(m)
    assert sympy.Matrix(inv) == sympy.Matrix(m).inv()
    with pytest.raises(ValueError):
        _linalg.upper_unitriangular_inverse([[2, 0], [0, 1]])


# -- P^1 and paths ----------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 11, 12, 37, 45, 64, 389])
def test_p1_size(N):
    psi = N
    for p in sympy.primefactors(N):
        psi = psi * (p + 1) // p
    assert len(P1Index(N)) == psi


def test_p1_normalize_is_projective():
    p1 = P1Index(45)
    for c, d in [(3, 7), (9, 2), (5, 1), (15, 4)]:
        for u in (2, 7, 11, 44):
            assert p1.normalize(u * c, u * d) == p1.normalize(c, d)
    with pytest.raises(ValueError):
        p1.normalize(3, 6)


@pytest.mark.parametrize("c,d", [(0, 1), (1, 0), (3, 5), (11, 4), (7, 22)])
def test_lift_to_sl2(c, d):
    a, b, c1, d1 = lift_to_sl2(c, d, 11)
    assert a * d1 - b * c1 == 1
    assert (c1 - c) % 11 == 0 and (d1 - d) % 11 == 0


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 6))
@settings(max_examples=100, deadline=None)
def test_floor_and_nearest_paths_agree(n, d):
    r = Fraction(n, d)
    for cf in (floor_cf(r), nearest_cf(r)):
        # partials (a_k, e_k) mean a_0 + e_1/(a_1 + e_2/(a_2 + ...))
        x = Fraction(cf[-1][0])
        for k in range(len(cf) - 2, -1, -1):
            x = cf[k][0] + cf[k + 1][1] / x
        assert x == r
    for c, dd in unimodular_steps(r, "nearest"):
        assert gcd(c, dd) == 1


def test_floor_and_nearest_eval_agree(sym11, sym37a):
    rng = random.Random(11)
    for _ in range(100):
        r = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        for sym in (sym11, sym37a):
            assert sym.eval_path(r) == sym.eval_path(r, "nearest")


def test_cusp_count():
    assert [cusp_count(N) for N in (1, 11, 12, 37, 64)] == [1, 2, 6, 2, 12]
    classes = CuspClasses(12)
    for a in range(-12, 13):
        for c in range(0, 30):
            if gcd(a, c) == 1:
                classes.index(a, c)
    assert len(classes.reps) == 6


def test_merel_count_matches_sigma():
    # oracle: brute-force enumeration over a box
    for n in (2, 3, 5, 7):
        brute = sum(1 for a in range(1, n + 1) for b in range(0, n) for c in range(0, n + 1)
                    for d in range(1, n + 1)
                    if a * d - b * c == n and a > b >= 0 and d > c >= 0)
        assert len(merel_matrices(n)) == brute


# -- spaces -----------------------------------------------------------------------

@pytest.mark.parametrize("N", [11, 37, 43, 67, 389])
def test_cuspidal_dimension_is_genus(N):
    g = genus_x0(N)
    assert build_space(N, 1).cuspidal_dimension == g
    assert build_space(N, -1).cuspidal_dimension == g


def test_hecke_eigenvalues_level_11(space11):
    for q, v in {2: -2, 3: -1, 7: -2}.items():
        assert hecke_operator(space11, q) == [[v]]


def test_hecke_operators_commute(space37):
    t2, t3 = hecke_operator(space37, 2), hecke_operator(space37, 3)
    assert _linalg.matmul(t2, t3) == _linalg.matmul(t3, t2)
    # characteristic polynomial of T_2 on S_2(37): x(x + 2)
    x = sympy.symbols("x")
    assert sympy.factor(sympy.Matrix(t2).charpoly(x).as_expr()) == x * (x + 2)


def test_build_space_rejects_bad_level():
    with pytest.raises(ValueError):
        build_space(0)
    with pytest.raises(ValueError):
        build_space(11, 2)


# -- eigensymbols -----------------------------------------------------------------

def test_eigensymbol_11a1_values(sym11):
    assert sym11.values == [2, -2, 0, -10, -5, 5, 10, 10, 5, -5, -10, 0]
    assert sym11.eval_path(0) == 2
    assert sym11.fricke_sign == -1


def test_eigensymbols_level_37(sym37a, sym37b):
    assert sym37a.eval_path(0) == 0 and sym37a.fricke_sign == 1
    assert sym37b.eval_path(0) == 2 and sym37b.fricke_sign == -1


def test_eigensymbol_errors(space11, space37):
    with pytest.raises(EigenspaceError):
        eigensymbol(space11, {2: 1})
    with pytest.raises(EigenspaceError):
        eigensymbol(space11, {})
    with pytest.raises(EigenspaceError):
        eigensymbol(space37, {5: 0, 2: -2, 3: 1})  # inconsistent
    with pytest.raises(EigenspaceError):
        eigensymbol(build_space(67), {7: -3})  # not enough to isolate


def test_eigensymbol_is_periodic_and_even(sym11, sym37a):
    rng = random.Random(5)
    for _ in range(40):
        r = Fraction(rng.randint(-200, 200), rng.randint(1, 200))
        for sym in (sym11, sym37a):
            assert sym.eval_path(r + 1) == sym.eval_path(r)
            assert sym.eval_path(-r) == sym.eval_path(r)


def test_minus_symbol_is_odd(space37_minus):
    sym = eigensymbol(space37_minus, EV_37A1)
    assert not sym.is_zero()
    rng = random.Random(9)
    for _ in range(40):
        r = Fraction(rng.randint(-200, 200), rng.randint(1, 200))
        assert sym.eval_path(-r) == -sym.eval_path(r)
    assert sym.eval_path(0) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_hecke_relation_defect_is_zero(sym11, sym37b, p):
    for sym in (sym11, sym37b):
        if p not in sym.eigenvalues:
            continue
        for n in range(0, 3):
            for a in range(0, p ** n):
                assert hecke_relation_defect(sym, p, a, n) == 0


def test_fricke_involution(sym11, sym37a):
    # W^2 = identity on paths: -1/(N * (-1/(N r))) = r
    N = 37
    for r in (Fraction(1, 3), Fraction(-5, 7), Fraction(2, 9)):
        wr = Fraction(-1) / (N * r)
        assert Fraction(-1) / (N * wr) == r
        assert sym37a.eval_segment(wr, 0) == sym37a.fricke_sign * sym37a.eval_segment(r, None)


# -- cache ------------------------------------------------------------------------

def test_dump_load_round_trip(space11, sym11):
    text = dump_space(space11, [sym11])
    assert text.startswith(CACHE_HEADER)
    space, syms = load_space(text)
    assert space.basis == space11.basis and syms[0].values == sym11.values
    assert dump_space(space, syms) == text


def test_load_rejects_corruption(space11):
    text = dump_space(space11)
    with pytest.raises(CacheFormatError):
        load_space("garbage\n")
    with pytest.raises(CacheFormatError):
        load_space(text.replace("p1 ", "p1 9:9 "))


def test_symbol_cache_cold_and_warm(tmp_path):
    cache = SymbolCache(tmp_path)
    cold = cache.eigensymbol(11, EV_11A1)
    first = open(cache.path(11, 1)).read()
    warm = SymbolCache(tmp_path).eigensymbol(11, EV_11A1)
    assert cold.values == warm.values and cold.fricke_sign == warm.fricke_sign
    assert open(cache.path(11, 1)).read() == first
    # damaged cache is rebuilt
    with open(cache.path(11, 1), "w") as fh:
        fh.write("PADICLF-MODSYM v0\n")
    assert SymbolCache(tmp_path).eigensymbol(11, EV_11A1).values == cold.values
    assert not [f for f in tmp_path.iterdir() if f.name.startswith(".tmp")]
