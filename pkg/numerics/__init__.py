from .symfun import (sigma_k, sigma_k_partial, in_gamma_k, cone_margin, newton_maclaurin_gap,
                     quotient_21, quotient_21_gradient, lemma_shift)
from .spectral import (OperatorKind, OperatorSpec, eigen, matrix_operator, matrix_admissible,
                       semiconvexity_constant, duality_pair)
from .transform import (subtract_reference_quadratic, add_reference_quadratic, hessian_shift,
                        discrete_legendre, eval_quadratic)
from .pde import discrete_hessian, residual, linearize, newton_solve

__all__ = [
    'sigma_k', 'sigma_k_partial', 'in_gamma_k', 'cone_margin', 'newton_maclaurin_gap',
    'quotient_21', 'quotient_21_gradient', 'lemma_shift',
    'OperatorKind', 'OperatorSpec', 'eigen', 'matrix_operator', 'matrix_admissible',
    'semiconvexity_constant', 'duality_pair',
    'subtract_reference_quadratic', 'add_reference_quadratic', 'hessian_shift',
    'discrete_legendre', 'eval_quadratic',
    'discrete_hessian', 'residual', 'linearize', 'newton_solve',
]
