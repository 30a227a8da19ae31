from config import Config


class HQLError(Exception):
    """Base class for all errors raised by the laboratory"""
    exit_code = 1


class ConfigError(HQLError):
    """Malformed or invalid run configuration"""
    exit_code = Config.EXIT_USAGE


class DomainError(HQLError, ValueError):
    """An argument lies outside the domain of an operation"""
    exit_code = Config.EXIT_DOMAIN


class SolverError(HQLError):
    """Newton solver failure; carries the partial report when one exists"""
    exit_code = Config.EXIT_SOLVER

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NonAdmissibleStart(SolverError):
    """Initial or predicted iterate is outside Γ₂"""


class Stagnation(SolverError):
    """Damping floor reached without sufficient decrease"""


class LinearSolveFailure(SolverError):
    """Sparse factorization failed or produced non-finite values"""


class IterationCap(SolverError):
    """Newton iteration cap reached"""
