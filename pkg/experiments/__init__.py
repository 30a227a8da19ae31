from .analysis import (c_of_n, theorem31_margin, fit_quadratic, interior_estimate_experiment,
                       liouville_probe, transformation_check, refinement_order)
from .boundary import BOUNDARY_FAMILIES, BoundaryFamily, get_family

__all__ = ['c_of_n', 'theorem31_margin', 'fit_quadratic', 'interior_estimate_experiment',
           'liouville_probe', 'transformation_check', 'refinement_order',
           'BOUNDARY_FAMILIES', 'BoundaryFamily', 'get_family']
