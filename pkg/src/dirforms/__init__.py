"""Rational linear forms in values of periodic Dirichlet series and the dimension bounds they give."""

from .bounds import alpha_closed, alpha_exact, beta, delta_bound, hypothesis_check, reproduce_table
from .evaluation import I_from_coeffs, I_tail, L_value, PrecisionSpec, cross_check, rate_empirical
from .forms import FormParams, construct, integrality_check, identity_check
from .saddle import SaddleContext, b_lambdas, find_t_lambda, find_x1_rho, rate_predicted
from .series import PeriodicSeries, preset, realify

__all__ = [
    "FormParams", "PeriodicSeries", "PrecisionSpec", "SaddleContext",
    "I_from_coeffs", "I_tail", "L_value", "alpha_closed", "alpha_exact", "b_lambdas", "beta",
    "construct", "cross_check", "delta_bound", "find_t_lambda", "find_x1_rho", "hypothesis_check",
    "identity_check", "integrality_check", "preset", "rate_empirical", "rate_predicted", "realify",
    "reproduce_table",
]
