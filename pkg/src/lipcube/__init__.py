"""Certified 2-D cubature for Lipschitz functions on rectangles.

The per-cell error bounds are closed-form midpoint/corner inequalities for
L-Lipschitz integrands; the interval module certifies the constants from an
expression, and the verify module numerically checks every inequality the
bounds rest on.
"""

from .core import (
    LipschitzConstants,
    Rectangle,
    UnitPair,
    corner_mean_bound,
    corner_midpoint_bound,
    h_lipschitz_modulus,
    h_vs_mean_bound,
    h_vs_midpoint_bound,
    m_constants,
    midpoint_mean_bound,
    oned_midpoint_bound,
    oned_trapezoid_bound,
    pointwise_gap_bound,
    shrink_toward_center,
    subrectangle_corner_bound,
)
from .integrator import CertifiedResult, InvalidToleranceError, integrate_certified, uniform_grid_bound
from .interval import (
    DerivBound,
    Interval,
    SingularityInDomain,
    UnboundedDerivative,
    certified_lipschitz,
    eval_with_derivatives,
    ia_apply,
    sampled_lipschitz,
)
from .quad import (
    ExprFunction,
    Function2D,
    corner_average,
    h_value,
    line_mean_x,
    line_mean_y,
    mean_value_oracle,
    midpoint_value,
)
from .verify import (
    InequalityCase,
    InvalidSpecError,
    RandomConeSpec,
    Report,
    VerifyConfig,
    check_coordinated_convexity,
    random_cone,
    run_suite,
    verify_1d_degenerate,
    verify_h_properties,
    verify_hadamard_chain,
    verify_lipschitz_bounds,
)

__version__ = "0.1.0"
