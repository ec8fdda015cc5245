"""Rational curves with a shared polynomial tangent field.

Construction of vector spaces of rational Pythagorean-hodograph curves whose
derivatives are scalar multiples of a prescribed quaternion-generated tangent
field, plus Hermite interpolation over those spaces as convex quadratic
programs with cusp-excluding sign constraints.
"""

from .algebra import Polynomial, Quaternion, QuaternionPolynomial, Vec3Poly
from .hodograph import FieldError, TangentField, direction_preimage, make_tangent_field, tangent_scalar, validate_field
from .spaces import (
    BasisElement,
    InterpolationSpace,
    NonRegularRequest,
    PolynomialRequest,
    RegularRequest,
    SpaceError,
    assemble_space,
    combine_elements,
    constant_elements,
    external_element,
    nonregular_basis,
    polynomial_basis,
    regular_basis,
)
from .rebase import RebasedSpace, energy_orthonormalize, gram_matrix, log_fraction
from .constraints import ConstraintError, HermiteData, cusp_rows, hermite_rows, mu_polynomials
from .objectives import (
    QuadratureError,
    arclength_objective,
    curve_arclength,
    curve_energy,
    curve_signed_arclength,
    energy_objective,
    quadrature,
    target_length_objective,
)
from .qpsolve import QpError, QpSolution, QuadraticProgram, solve
from .jobs import ConfigError, JobConfig, JobError, JobReport, load_config, parse_config, run_job, sample_curve
from .builtin_jobs import BUILTIN_JOBS, get_builtin

__version__ = "0.1.0"

__all__ = [
    "Polynomial",
    "Quaternion",
    "QuaternionPolynomial",
    "Vec3Poly",
    "FieldError",
    "TangentField",
    "direction_preimage",
    "make_tangent_field",
    "tangent_scalar",
    "validate_field",
    "BasisElement",
    "InterpolationSpace",
    "NonRegularRequest",
    "PolynomialRequest",
    "RegularRequest",
    "SpaceError",
    "assemble_space",
    "combine_elements",
    "constant_elements",
    "external_element",
    "nonregular_basis",
    "polynomial_basis",
    "regular_basis",
    "RebasedSpace",
    "energy_orthonormalize",
    "gram_matrix",
    "log_fraction",
    "ConstraintError",
    "HermiteData",
    "cusp_rows",
    "hermite_rows",
    "mu_polynomials",
    "QuadratureError",
    "arclength_objective",
    "curve_arclength",
    "curve_energy",
    "curve_signed_arclength",
    "energy_objective",
    "quadrature",
    "target_length_objective",
    "QpError",
    "QpSolution",
    "QuadraticProgram",
    "solve",
    "ConfigError",
    "JobConfig",
    "JobError",
    "JobReport",
    "load_config",
    "parse_config",
    "run_job",
    "sample_curve",
    "BUILTIN_JOBS",
    "get_builtin",
    "__version__",
]
