"""Joint complete monotonicity of 1/p(m, n), representing measures and weighted 2-shifts."""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .poly_core import (BilinearPoly, FactoredPoly, MomentNet, PartialFraction,  # noqa: F401
                        PencilPoly, eval_pencil, falling_factorial,
                        forward_difference, net_from_pencil, partial_fractions)
from .monotonicity import (CriteriaReport, Decision, JcmVerdict, MixedVerdict,  # noqa: F401
                           bidegree21_mixed, bidegree21_sufficient,
                           bilinear_criterion, coefficient_matrix_tests,
                           criteria_report, derivative_necessary,
                           exp_combination_nonpositive, hausdorff_obstruction,
                           interlacing_S, is_cm_sequence, is_jcm_net,
                           mean_inequalities_N, minimality_estimate)
from .special import BesselEval, bessel_I, bessel_J  # noqa: F401
from .measures import (Measure1D, Measure2D, asymptote_check, measure_bilinear,  # noqa: F401
                       measure_pencil, mult_convolve, verify_moments, weight_wj)
from .operators import (IsometryReport, WeightedShift2, cauchy_dual,  # noqa: F401
                        dual_subnormality_decision, norm_net,
                        separate_2iso_check, shift_from_poly,
                        toral_m_isometry_check)
