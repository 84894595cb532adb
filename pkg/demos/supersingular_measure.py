"""The supersingular fixture 37b1 at p = 5, where a_5 = 0 and alpha^2 = -5.

Values live in Q(alpha); p-adic numbers only appear after embedding
alpha into the ramified extension.
"""

from padiclf.lseries import decay_check, functional_equation_check
from padiclf.measure import build_measure, moments
from padiclf.modsym import build_space, eigensymbol

sym = eigensymbol(build_space(37), {2: 0, 3: 1, 5: 0, 7: -1})
table = build_measure(sym, 5, 5, root="plus")

print("level 1 cells:")
for a, v in sorted(table.levels[1].items()):
    print(f"  mu(D({a}, 5)) = {v.a} + ({v.b}) alpha, valuation {table.valuation_of(v)}")

print("additivity checks:", table.check_additivity())
print("mass equals (1 - 1/alpha)^2 lam(0):", table.total_mass() == table.expected_mass())

fe = functional_equation_check(table, [1, 6, -4], m=5)
print("functional equation sign:", fe.sign, "passed:", fe.passed)

ledger = decay_check(moments(table, 20, 5))
for e in ledger.entries[:8]:
    print(f"  k={e.k}: v >= {e.lower_bound}, bound {e.bound}, margin {e.margin}")
print("decay passed:", ledger.passed)
