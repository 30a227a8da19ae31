from .errors import (HQLError, ConfigError, DomainError, SolverError, NonAdmissibleStart,
                     Stagnation, LinearSolveFailure, IterationCap)
from .spectrum import Spectrum, ConeLabel
from .matrix import SymMatrix, EigenDecomposition
from .grid import Grid, GridFunction, QuadraticForm
from .problem import PDEOperator, ProblemSpec, SolveReport

__all__ = ['HQLError', 'ConfigError', 'DomainError', 'SolverError', 'NonAdmissibleStart',
           'Stagnation', 'LinearSolveFailure', 'IterationCap', 'Spectrum', 'ConeLabel',
           'SymMatrix', 'EigenDecomposition', 'Grid', 'GridFunction', 'QuadraticForm',
           'PDEOperator', 'ProblemSpec', 'SolveReport']
