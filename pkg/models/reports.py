from dataclasses import dataclass, field
from typing import Dict, List, Optional

from models.grid import QuadraticForm

INTERIOR_CSV_COLUMNS = [
    'run_id', 'n', 'm', 'L', 'boundary_id', 'lip_norm', 'hess0_max', 'hess0_spec',
    'K_semiconvex', 'thm31_margin', 'newton_iters', 'final_residual',
]


@dataclass
class RigidityReport:
    """Least-squares quadratic fit of a computed field"""
    fit: QuadraticForm
    residual: float
    hessian_spread: float
    boundary_id: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    error: Optional[str] = None

    def within(self, tolerance: float) -> bool:
        return self.error is None and self.residual <= tolerance and self.hessian_spread <= tolerance

    def to_dict(self) -> dict:
        return {
            'boundary_id': self.boundary_id,
            'n': self.n,
            'm': self.m,
            'fit': self.fit.to_dict(),
            'residual': None if self.error else self.residual,
            'hessian_spread': None if self.error else self.hessian_spread,
            'error': self.error,
        }


@dataclass
class InteriorRecord:
    """One solve of the interior-estimate batch"""
    run_id: int
    n: int
    m: int
    L: float
    boundary_id: str
    status: str = 'ok'
    lip_norm: Optional[float] = None
    hess0_max: Optional[float] = None
    hess0_spec: Optional[float] = None
    K_semiconvex: Optional[float] = None
    K_shifted: Optional[float] = None
    thm31_margin: Optional[float] = None
    newton_iters: Optional[int] = None
    final_residual: Optional[float] = None
    estimate_stress: bool = False
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.status != 'ok'

    def csv_row(self) -> List[str]:
        """Row in INTERIOR_CSV_COLUMNS order; failed runs carry 'failed' in the solver columns"""
        def fmt(value):
            return '' if value is None else repr(float(value))

        if self.failed:
            return [str(self.run_id), str(self.n), str(self.m), repr(float(self.L)),
                    self.boundary_id, '', '', '', '', '', 'failed', 'failed']
        return [str(self.run_id), str(self.n), str(self.m), repr(float(self.L)), self.boundary_id,
                fmt(self.lip_norm), fmt(self.hess0_max), fmt(self.hess0_spec),
                fmt(self.K_semiconvex), fmt(self.thm31_margin),
                str(self.newton_iters), fmt(self.final_residual)]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class InteriorReport:
    """Run table plus per-family refinement drift"""
    records: List[InteriorRecord] = field(default_factory=list)
    drift: Dict[str, float] = field(default_factory=dict)
    drift_tolerance: float = 0.02
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def failed_runs(self) -> List[int]:
        return [r.run_id for r in self.records if r.failed]

    @property
    def stressed_runs(self) -> List[int]:
        return [r.run_id for r in self.records if r.estimate_stress]

    def drift_violations(self) -> Dict[str, float]:
        return {key: value for key, value in self.drift.items() if value > self.drift_tolerance}

    def summary(self) -> dict:
        return {
            'runs': len(self.records),
            'failed_runs': self.failed_runs,
            'estimate_stress_runs': self.stressed_runs,
            'drift': dict(self.drift),
            'drift_tolerance': self.drift_tolerance,
            'drift_violations': self.drift_violations(),
            'metadata': dict(self.metadata),
            'records': [r.to_dict() for r in self.records],
        }


@dataclass
class PropertyResult:
    """Outcome of one verification property in one dimension"""
    name: str
    dimension: Optional[int]
    samples: int
    worst_violation: float
    tolerance: float
    passed: bool
    detail: Optional[str] = None

    def to_dict(self) -> dict:
        data = {
            'name': self.name,
            'dimension': self.dimension,
            'samples': self.samples,
            'worst_violation': self.worst_violation,
            'tolerance': self.tolerance,
            'passed': self.passed,
        }
        if self.detail:
            data['detail'] = self.detail
        return data
