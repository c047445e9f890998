"""Asymptotic cost exponents of ISD algorithms and their optimisation."""

from .entropy import (
    ConfigVector, binom_exp, config_vector, entropy, entropy_inv, lsf_cost_exponents,
    lsf_filter_exponent, may_ozerov_exponent,
)
from .models import (
    CLASSICAL, MODELS, QUANTUM, CostBreakdown, RateProfile, breakdown, classical_exponent,
    evaluate, perm_exponent, quantum_exponent,
)
from .optimize import InfeasibleModel, OptimizeResult, gv_omega, optimize_params, worst_case_rate
from .walks import (
    empirical_marked_fraction, johnson_gap, johnson_gap_spectral, marked_fraction,
    quantum_walk_total,
)
