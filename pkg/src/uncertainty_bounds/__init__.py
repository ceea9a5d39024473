"""Generalized uncertainty-relation bounds for pure states of finite-dimensional systems."""

from .bounds import (
    FAMILIES,
    BoundReport,
    PerpContext,
    evaluate,
    evaluate_many,
    gen_product_hr_report,
    gen_product_hrs_report,
    gen_sum_hr_report,
    gen_sum_hrs_report,
    general_alpha_report,
    general_alpha_value,
    hr_report,
    hrs_report,
    mp_report,
    optimal_alpha,
    perp_context,
    schwarz_report,
)
from .core import (
    HermitianOperator,
    Ket,
    StateVector,
    anticommutator_expectation,
    apply,
    commutator_expectation,
    deviation_vector,
    expectation,
    inner,
    orthonormal_complement_basis,
    variance,
)
from .operators import oscillator_operator, spin1_theta_state, spin_basis_state, spin_operator
from .optimizer import OptimizeConfig, OptimizeResult, optimize_perp, sweep_theta

__version__ = "0.1.0"
