"""Generalized Bessel polynomials y_n(x, a, b), their moment functional, the
positive weight p(theta, a, b) on the unit circle and the associated complex
Jacobi matrix."""

from .params import (
    BesselParams,
    ConvergenceError,
    DegenerateStepError,
    HorizonTooSmallError,
    NonRationalError,
    ParameterError,
    PrecisionBudgetError,
)
from .core_poly import (
    PolyCoeffs,
    bound_pn,
    bound_yn,
    eval_poly,
    normalization,
    normalized_coeffs,
    recurrence_coeffs,
    series_coeffs,
)
from .moments import (
    apply_functional,
    moment,
    norm_constant,
    normalized_orthogonality,
    orthogonality_matrix,
    second_kind_exact,
)
from .weight import (
    bridge_identity_residual,
    g_function,
    m_ab,
    rho,
    solve_x0,
    weight_highprec,
    weight_integral,
    weight_series,
)
from .quadrature import (
    c_form,
    check_general_solution_bound,
    check_qn_bound,
    kernel,
    second_kind_quadrature,
    second_kind_rho,
    trapezoid,
    verify_orthogonality,
)
from .jacobi import (
    build_truncated,
    eigen_relation_residual,
    jacobi_an,
    jacobi_bn,
    norm_bound_sup,
    solve_difference,
    truncated_norm,
)
from ._kernels import backend

__version__ = "0.1.0"
