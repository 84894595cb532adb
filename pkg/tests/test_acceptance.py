"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are
printed even when output is captured.
"""

import random
import time
from fractions import Fraction

import pytest
import sympy

from padiclf.lseries import (decay_check, eval_at, falling_factorial_derivative,
                             functional_equation_check, order_of_vanishing, taylor_expand,
                             truncated_psi_inverse, verify_c1_lemma)
from padiclf.measure import build_measure, moments
from padiclf.modsym import build_space, eigensymbol
from padiclf.numoracle import a_p, l_value_numeric, real_period
from padiclf.padics import PadicNumber

from conftest import CURVE_11A1, CURVE_37A1, CURVE_37B1, EV_11A1, EV_37A1, EV_37B1

P = 5
# fixtures: (label, curve, eigenvalues, root); 37b1 has a_5 = 0
ORDINARY = ("11a1", CURVE_11A1, EV_11A1, "unit")
SUPERSINGULAR = ("37b1", CURVE_37B1, EV_37B1, "plus")
FIXTURES = (ORDINARY, SUPERSINGULAR)


def verdict(capsys, n, title, ok, detail=""):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"criterion {n} failed: {detail}"


@pytest.fixture(scope="module")
def tables():
    out = {}
    for label, curve, ev, root in FIXTURES:
        sym = eigensymbol(build_space(curve.conductor), ev)
        out[label] = (sym, build_measure(sym, P, 6, root=root, check=False))
    return out


def test_criterion_1_additivity(capsys):
    details, ok = [], True
    for label, curve, ev, root in FIXTURES:
        t0 = time.perf_counter()
        sym = eigensymbol(build_space(curve.conductor), ev)
        table = build_measure(sym, P, 6, root=root, check=False)
        checked = table.check_additivity()  # raises on the first mismatch
        dt = time.perf_counter() - t0
        ok = ok and dt < 30
        details.append(f"{label}: {checked} parents at levels 1..5 in {dt:.1f}s")
    verdict(capsys, 1, "exact additivity, ordinary and supersingular", ok, "; ".join(details))


def test_criterion_2_interpolation(capsys, tables):
    sym, table = tables["11a1"]
    exact = table.total_mass() == table.expected_mass()
    L = l_value_numeric(CURVE_11A1, 2000, -sym.fricke_sign)
    ratio = L.value / real_period(CURVE_11A1)
    normalization = 10  # recorded: eval_path(0) = 2 and L/Omega = 1/5
    rel = abs(float(sym.eval_path(0)) / normalization - ratio) / ratio
    verdict(capsys, 2, "total mass and L(E,1)/Omega", exact and rel < 1e-4,
            f"mass exact={exact}; L/Omega={ratio:.10f}; relative error {rel:.1e}")


def test_criterion_3_rank_sensitivity(capsys):
    t0 = time.perf_counter()
    sym = eigensymbol(build_space(37), EV_37A1)
    table = build_measure(sym, P, 5)
    ser = taylor_expand(table, 1, 8, 5, 40)
    rep = order_of_vanishing(ser)
    dt = time.perf_counter() - t0
    c0 = ser[0]
    floor_ok = c0.is_zero() and c0.abs_precision >= 4
    ok = floor_ok and rep.determined and rep.order >= 1 and dt < 300
    # regression value: c_1 provably nonzero with valuation 1
    ok = ok and ser[1].provably_nonzero() and ser[1].valuation == 1
    verdict(capsys, 3, "37a1 vanishes at s=1 to order >= 1", ok,
            f"c_0 = 0 mod 5^{c0.abs_precision}; order {rep.order}; {rep.ledger[-1]}; {dt:.1f}s")


def test_criterion_4_functional_equation(capsys, tables):
    details, ok = [], True
    for label in ("11a1", "37b1"):
        _, table = tables[label]
        rep = functional_equation_check(table, [1, 1 + P, 1 - P], m=5)
        ok = ok and rep.passed and rep.sign is not None
        floors = ", ".join(str(s.residual.abs_precision) for s in rep.samples)
        details.append(f"{label}: sign {rep.sign:+d}, residual floors {floors}")
    verdict(capsys, 4, "functional equation at s = 1, 1+p, 1-p", ok, "; ".join(details))


def test_criterion_5_decay(capsys, tables):
    details, ok = [], True
    for label in ("11a1", "37b1"):
        _, table = tables[label]
        led = decay_check(moments(table, 20, 5))
        margin = min(e.margin for e in led.entries)
        ok = ok and led.passed and margin >= 0
        details.append(f"{label}: k<=20 min margin {margin}")
    verdict(capsys, 5, "moment decay ledger", ok, "; ".join(details))


def test_criterion_6_combinatorics(capsys):
    rng = random.Random(2024)
    s = sympy.Symbol("s")
    points = [PadicNumber.from_rational(rng.randrange(5 ** 20), P, 20) for _ in range(5)]
    t_oracle = time.perf_counter()
    # oracle: sympy derivatives of (s-1)...(s-n), evaluated exactly
    want = {}
    for n in range(0, 9):
        q = sympy.prod([s - i for i in range(1, n + 1)])
        for j in range(0, n + 1):
            d = sympy.Poly(sympy.diff(q, s, j), s)
            for i, x in enumerate(points):
                want[n, j, i] = PadicNumber.from_rational(int(d.eval(x.lift())), P, 20)
    t_oracle = time.perf_counter() - t_oracle
    t0 = time.perf_counter()
    ok = all(falling_factorial_derivative(n, j, points[i]) == v for (n, j, i), v in want.items())
    lemma = all(verify_c1_lemma(n, j, rng.randint(-50, 50), rng.randint(1, 4))
                for n in range(2, 9) for j in range(1, n))
    ks = sorted(rng.sample(range(1, 60), 12))
    r = truncated_psi_inverse(12, ks, 1, P)
    dt = time.perf_counter() - t0
    identity = all(x == 0 for row in r.residual for x in row)
    integral = all(x.denominator % P for m in (r.matrix, r.inverse) for row in m for x in row)
    verdict(capsys, 6, "falling factorials, c_1 lemma, psi inversion",
            ok and lemma and identity and integral and dt < 10,
            f"derivatives={ok}; lemma={lemma}; K=12 identity={identity}; p-integral={integral}; "
            f"k={ks}; {dt:.2f}s (sympy oracle {t_oracle:.1f}s)")


def test_criterion_7_two_paths(capsys, tables):
    t0 = time.perf_counter()
    rng = random.Random(77)
    ok, worst = True, None
    for label in ("11a1", "37b1"):
        _, table = tables[label]
        ser = taylor_expand(table, 1, 8, 5, 40)
        for _ in range(5):
            s = 1 + P * rng.randint(-10 ** 4, 10 ** 4)
            a, b = ser.evaluate(s), eval_at(table, s, 5)
            shared = min(a.abs_precision, b.abs_precision)
            ok = ok and a.agrees_with(b, shared)
            worst = shared if worst is None else min(worst, shared)
        for m in (3, 4, 5):
            for s in (2, 1 - P, 1 + 2 * P):
                lo, hi = eval_at(table, s, m), eval_at(table, s, m + 1)
                ok = ok and lo.agrees_with(hi, table.error_floor(m))
    dt = time.perf_counter() - t0
    verdict(capsys, 7, "eval_at vs series, level m vs m+1", ok and dt < 60,
            f"10 random points, weakest shared floor {worst}; {dt:.1f}s")


def test_criterion_8_nonvanishing(capsys, tables):
    details, ok = [], True
    extra = eigensymbol(build_space(37), EV_37A1)
    all_tables = dict(tables, **{"37a1": (extra, build_measure(extra, P, 5))})
    for label, (_, table) in all_tables.items():
        found = None
        for center in (1, 2):
            rep = order_of_vanishing(taylor_expand(table, center, 8, 5, 40))
            if rep.determined:
                found = (center, rep.order, rep.leading_coeff.valuation)
                break
        ok = ok and found is not None
        details.append(f"{label}: " + (f"c_{found[1]} at s0={found[0]} nonzero, valuation {found[2]}"
                                       if found else "nothing provably nonzero"))
    verdict(capsys, 8, "a provably nonzero Taylor coefficient", ok, "; ".join(details))


def _hecke_eigenvalue(sym, q):
    """a_q from the action of T_q on the symbol, at several points."""
    ratios = []
    for r in (Fraction(a, d) for d in range(1, 40) for a in range(d)):
        value = sym.eval_path(r)
        if value:
            image = sum(sym.eval_path((r + b) / q) for b in range(q)) + sym.eval_path(q * r)
            ratios.append(image / value)
        if len(ratios) == 5:
            break
    assert len(set(ratios)) == 1
    return ratios[0]


def test_criterion_9_oracle_agreement(capsys):
    details, ok = [], True
    # cut out each eigenline with primes outside {2, 3, 7, 13}
    cut = {"11a1": (11, {5: 1}, CURVE_11A1), "37a1": (37, {5: -2}, CURVE_37A1),
           "37b1": (37, {5: 0}, CURVE_37B1)}
    for label, (N, ev, curve) in cut.items():
        sym = eigensymbol(build_space(N), ev)
        pairs = [(q, a_p(curve, q), _hecke_eigenvalue(sym, q)) for q in (2, 3, 7, 13)]
        ok = ok and all(x == y for _, x, y in pairs)
        details.append(f"{label}: " + " ".join(f"a_{q}={x}/{y}" for q, x, y in pairs))
    verdict(capsys, 9, "point counts equal Hecke eigenvalues", ok, "; ".join(details))
