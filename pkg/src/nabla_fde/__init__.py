"""Nabla discrete fractional calculus.

Fractional sums and Caputo differences on sampled sequences, the discrete
Mittag-Leffler function, time-domain solvers for the scalar system
``Caputo^alpha y = lambda*y + u`` and a pole-geometry behaviour classifier.
"""

from .classifier import (
    BehaviorClass,
    EmpiricalVerdict,
    PoleRegion,
    Verdict,
    classify_zero_input,
    critical_radius,
    empirical_classify,
    principal_pole,
    region_test,
)
from .errors import (
    DomainError,
    InsufficientHistoryError,
    NablaFDEError,
    NoPoleError,
    NonConvergedAtCap,
    NumericalError,
    PoleError,
    ResponseOverflow,
    SeriesNotConvergent,
)
from .mittag_leffler import (
    MLGrid,
    MLQuery,
    MLResult,
    ml_alpha1_closed,
    ml_boundary_values,
    ml_eval,
    ml_integer_closed,
    ml_sequence,
    ml_transform_point,
)
from .operators import SampledSignal, backward_diff, caputo_diff, frac_sum
from .solver import (
    InputSignal,
    Response,
    SystemSpec,
    difference_bound,
    initial_history,
    residual,
    solve_explicit,
    solve_recursive,
)
from .special import (
    CoefficientTable,
    binom_general,
    log_gamma_signed,
    reciprocal_gamma,
    rising_factorial,
    sum_coefficients,
)
from .transform import (
    ResponseTransform,
    diff_rule_residual,
    final_value_estimate,
    initial_value,
    n_transform_partial,
    response_transform_eval,
)

__version__ = "0.1.0"
