"""Hermite-spectral toolkit for harmonic analysis under the Gaussian measure.

Finite Hermite expansions, Gauss-Hermite quadrature, the
Ornstein-Uhlenbeck and Poisson-Hermite semigroups with spectral and
quadrature paths, Riesz/Bessel potentials and fractional derivatives
with dual computation paths, Gaussian smoothness norms, Hardy
inequality functionals, and an empirical verification harness.
"""

from .fractional import (
    FracOperatorSpec,
    OperatorKind,
    OperatorPath,
    apply_operator,
    apply_spectral,
    bessel_derivative_integral,
    bessel_potential_integral,
    big_C_beta_k,
    c_beta_k,
    default_difference_order,
    forward_difference,
    inversion_check,
    riesz_derivative_integral,
    riesz_potential_integral,
    spectral_multiplier,
)
from .hermite import (
    ExpansionFormatError,
    GaussHermiteGrid,
    HermiteExpansion,
    MultiIndex,
    all_multi_indices,
    apply_order_multiplier,
    apply_ou_generator,
    chaos_projection,
    differentiate,
    expansion_eval,
    expansion_from_json,
    expansion_to_json,
    gauss_hermite_grid,
    hermite_1d,
    hermite_eval,
    multiply_by_coordinate,
    order,
    pi0,
    project_coefficient,
    read_expansion,
    write_expansion,
)
from .semigroups import (
    SubordinatorGrid,
    TimeGrid,
    ou_apply_pointwise,
    ou_apply_spectral,
    p_infinity,
    poisson_apply_spectral,
    poisson_apply_subordinated,
    poisson_kernel,
    poisson_time_derivative,
    subordinator_grid,
)
from .spaces import (
    TLNormEvaluator,
    TLNormParams,
    hardy_check_1,
    hardy_check_2,
    hardy_check_k,
    lp_gamma_norm,
    tl_norm,
    tl_seminorm,
)
from .verification import GridConfig, VerificationReport, run_all, run_suite

__version__ = "0.1.0"
