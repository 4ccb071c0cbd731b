"""Survival of a binary branching random walk killed below a line of slope v.

The package computes the critical pair ``(t*, v*)`` of a finite step law,
the complex roots of the linearised survival equation, super- and
sub-solution fronts, the survival probability as the fixed point of a
monotone convolution operator, and two stochastic cross-checks (a Monte
Carlo oracle for ``q_n`` and the N-particle branching-selection system).
"""
from .critical import CriticalParams, Regime, classify, critical_params, solve_t_star, v_star_infimum
from .errors import (
    BudgetDominated,
    DegenerateStep,
    DomainError,
    EpsTooLarge,
    KilledBRWError,
    MaxIters,
    NoConvergence,
    NotSubcritical,
    NotSupercritical,
    PropertyViolation,
    SubcriticalKept,
    ZeroLaplace,
)
from .fixedpoint import (
    GridConfig,
    GridFunction,
    RightMode,
    SurvivalEstimate,
    apply_T,
    iterate_to_fixed_point,
    psi,
    psi_minus,
    psi_plus,
    q_n,
)
from .fronts import build_sub, build_super, check_sub_inequality, check_super_inequality
from .gwbounds import kept_steps_lower_bound, regime_report, supercritical_survival
from .linwave import LinearWave, linear_wave, solve_phi
from .step_dist import StepDistribution, load_distribution, log_laplace

__version__ = "0.1.0"
