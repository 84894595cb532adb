"""Walk through the pipeline for 11a1 (rank 0) and 37a1 (rank 1) at p = 5.

Run with ``python3 demos/rank_zero_vs_rank_one.py``.
"""

from padiclf.lseries import order_of_vanishing, taylor_expand
from padiclf.measure import build_measure
from padiclf.modsym import build_space, eigensymbol

CURVES = {
    "11a1": (11, {2: -2, 3: -1, 5: 1}),
    "37a1": (37, {2: -2, 3: -3, 5: -2}),
}

for label, (N, ev) in CURVES.items():
    sym = eigensymbol(build_space(N), ev)
    print(f"{label}: eval_path(0) = {sym.eval_path(0)}, Fricke sign {sym.fricke_sign:+d}")

    table = build_measure(sym, 5, 5)
    print(f"  total mass {table.total_mass().a} + ({table.total_mass().b}) alpha, c0 = {table.c0}")

    series = taylor_expand(table, 1, 4, 5, 40)
    for j, c in enumerate(series.coeffs):
        print(f"  c_{j} = {c}")
    report = order_of_vanishing(series)
    print(f"  order at s = 1: {report.order}")
    for line in report.ledger:
        print(f"    {line}")
