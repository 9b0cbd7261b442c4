"""Exact/numeric verification toolkit for general (alpha,beta)-Finsler metrics.

Two engines working in tandem:

* an exact symbolic engine (rational functions over Q in s, u, C, T with
  u**2 = b**2) that reproduces the curvature-condition computations, and
* a numeric engine based on truncated-Taylor (jet) differentiation that
  computes every curvature tensor straight from its definition and serves
  as an independent oracle for the closed forms.
"""

from .ratexpr import RatExpr, PoleError, NonPolynomialError
from .symbolic import (PhiSpec, FundamentalBundle, ConditionSet,
                       fundamental_quantities, weak_landsberg_conditions,
                       mean_landsberg_scalar, mean_cartan_scalar, njfi,
                       extract_case_coefficients, case_odes_residual,
                       verify_theorem_family, generic_case)
from .jets import Jet, JetSpace
from .geometry import (ChartMetric, BetaInvariants, CurvatureReport,
                       curvature_report, convexity_check)
from .zoo import (ZooEntry, make_riemannian, make_randers, make_square,
                  make_berwald_example, make_theorem_family, builtin_entries)

__version__ = "0.1.0"
