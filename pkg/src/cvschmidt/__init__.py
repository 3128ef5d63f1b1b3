"""Schmidt decomposition of continuous-variable bipartite states by discrete orthonormal expansions."""
from .amplitude import (DEFAULT_PHYSICAL, Amplitude, PdcParams, normalize, pdc_amplitude,
                        pdc_from_physical, pdc_norm_squared, product_amplitude, sinc)
from .basis import BasisFamily, BasisKind, eval_basis, eval_basis_batch
from .errors import InputError, NumericalError
from .expr import ExpressionSyntaxError, parse_expression
from .quadrature import Measure, QuadratureRule, gauss_rule, integrate_2d, norm_squared, rule_for_basis
from .schmidt import (CoefficientMatrix, SchmidtDecomposition, compute_coefficients, decompose,
                      delta_coefficients, distance_d1, distance_d2, entropy, eval_mode,
                      mode_to_monomial, schmidt_decompose, schmidt_number)

__version__ = "0.1.0"
