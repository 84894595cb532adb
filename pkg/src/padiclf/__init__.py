"""Exact computation of cyclotomic p-adic L-functions of weight-2 newforms."""

from .padics import (AlphaContext, AlphaElement, PadicNumber, angle_part, binomial_series_power,
                     factorial_valuation, hecke_roots, padic, teichmuller)
from .modsym import EigenSymbol, P1Index, build_space, eigensymbol, fricke_sign, hecke_operator
from .measure import (MeasureTable, MomentVector, build_measure, import_external_table,
                      mod_p_scan, moments, riemann_integral)
from .lseries import (OrderReport, PadicPowerSeries, PrecisionExhausted, decay_check, eval_at,
                      falling_factorial_derivative, functional_equation_check, order_of_vanishing,
                      taylor_expand, truncated_psi_inverse, verify_c1_lemma)
from .numoracle import CurveData, a_p, l_value_numeric, real_period

__version__ = "0.1.0"
