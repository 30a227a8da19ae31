"""
Declarative JSON run configs, one dataclass per CLI command.

Every file carries ``schema_version``; unknown keys are rejected so typos do
not silently fall back to defaults.
"""

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import Config
from models.errors import ConfigError
from utils.validators import (validate_choices, validate_int, validate_int_list,
                              validate_node_count, validate_positive)

KNOWN_OPERATORS = ('quotient21', 'sigma2')


def load_json(path: str) -> Dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON in {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return data


def _check_keys(data: Dict[str, Any], cls) -> None:
    allowed = {f.name for f in fields(cls)} | {'schema_version', 'command'}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys {unknown} for {cls.__name__}")


def _check_schema(data: Dict[str, Any]) -> None:
    version = data.get('schema_version')
    if version != Config.CONFIG_SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version must be {Config.CONFIG_SCHEMA_VERSION}, got {version!r}"
        )


def _resolutions(name: str, value: Any, dimensions: List[int]) -> Dict[int, List[int]]:
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must map dimensions to node-count lists")
    out = {}
    for n in dimensions:
        entry = value.get(str(n), value.get(n))
        if entry is None:
            raise ConfigError(f"{name} has no entry for dimension {n}")
        if not isinstance(entry, list) or not entry:
            raise ConfigError(f"{name}[{n}] must be a non-empty list")
        out[n] = sorted(validate_node_count(f"{name}[{n}]", m) for m in entry)
    return out


@dataclass
class RunConfig:
    """Fields shared by every command"""
    seed: int = Config.DEFAULT_SEED
    out_dir: str = "."

    @classmethod
    def from_file(cls, path: str, command: Optional[str] = None, **overrides):
        data = load_json(path)
        if command is not None and data.get("command", command) != command:
            raise ConfigError(f"config {path} is for command {data['command']!r}, not {command!r}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]):
        raise NotImplementedError

    def to_dict(self) -> dict:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.pop('out_dir', None)
        data['schema_version'] = Config.CONFIG_SCHEMA_VERSION
        return data


@dataclass
class VerifyConfig(RunConfig):
    dimensions: List[int] = field(default_factory=lambda: list(range(2, 11)))
    samples: int = 10000
    duality_dimensions: Optional[List[int]] = None
    duality_samples: int = 1000
    invariance_samples: int = 100
    c_dimensions: List[int] = field(default_factory=lambda: list(range(2, 65)))
    transform_resolutions: List[int] = field(default_factory=lambda: [9, 17, 33])

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerifyConfig":
        _check_schema(data)
        _check_keys(data, cls)
        cfg = cls(seed=validate_int('seed', data.get('seed', Config.DEFAULT_SEED), minimum=0),
                  out_dir=str(data.get('out_dir', '.')))
        cfg.dimensions = validate_int_list('dimensions', data.get('dimensions', cfg.dimensions), minimum=2)
        cfg.samples = validate_int('samples', data.get('samples', cfg.samples), minimum=1)
        if 'duality_dimensions' in data:
            cfg.duality_dimensions = validate_int_list('duality_dimensions', data['duality_dimensions'],
                                                       minimum=2)
        else:
            cfg.duality_dimensions = [n for n in cfg.dimensions if n <= 8] or cfg.dimensions
        cfg.duality_samples = validate_int('duality_samples', data.get('duality_samples', cfg.duality_samples),
                                           minimum=1)
        cfg.invariance_samples = validate_int('invariance_samples',
                                              data.get('invariance_samples', cfg.invariance_samples), minimum=1)
        cfg.c_dimensions = validate_int_list('c_dimensions', data.get('c_dimensions', cfg.c_dimensions),
                                             minimum=2)
        cfg.transform_resolutions = [
            validate_node_count('transform_resolutions', m)
            for m in validate_int_list('transform_resolutions',
                                       data.get('transform_resolutions', cfg.transform_resolutions))
        ]
        return cfg


@dataclass
class SolveConfig(RunConfig):
    dimension: int = 3
    nodes: int = 17
    half_width: float = 1.0
    operator: str = 'quotient21'
    rhs: float = 1.0
    boundary: Dict[str, Any] = field(default_factory=lambda: {'family': 'quad_iso'})
    continuation_steps: int = Config.CONTINUATION_STEPS

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolveConfig":
        from experiments.boundary import BOUNDARY_FAMILIES

        _check_schema(data)
        _check_keys(data, cls)
        cfg = cls(seed=validate_int('seed', data.get('seed', Config.DEFAULT_SEED), minimum=0),
                  out_dir=str(data.get('out_dir', '.')))
        cfg.dimension = validate_int('dimension', data.get('dimension', cfg.dimension), minimum=2)
        cfg.nodes = validate_node_count('nodes', data.get('nodes', cfg.nodes))
        cfg.half_width = validate_positive('half_width', data.get('half_width', cfg.half_width))
        operator = data.get('operator', cfg.operator)
        if operator not in KNOWN_OPERATORS:
            raise ConfigError(f"operator must be one of {KNOWN_OPERATORS}, got {operator!r}")
        cfg.operator = operator
        # rhs > 0 is a ProblemSpec invariant, checked when the problem is built
        rhs = data.get('rhs', cfg.rhs)
        if isinstance(rhs, bool) or not isinstance(rhs, (int, float)):
            raise ConfigError(f"rhs must be a number, got {rhs!r}")
        cfg.rhs = float(rhs)
        boundary = data.get('boundary', cfg.boundary)
        if not isinstance(boundary, dict) or len(boundary) != 1 or \
                not ({'family', 'quadratic'} & set(boundary)):
            raise ConfigError("boundary must be {'family': id} or {'quadratic': {'A', 'b', 'c'}}")
        if 'family' in boundary:
            validate_choices('boundary.family', [boundary['family']], BOUNDARY_FAMILIES)
        elif not isinstance(boundary['quadratic'], dict) or 'A' not in boundary['quadratic']:
            raise ConfigError("boundary.quadratic needs at least the matrix 'A'")
        cfg.boundary = boundary
        cfg.continuation_steps = validate_int('continuation_steps',
                                              data.get('continuation_steps', cfg.continuation_steps),
                                              minimum=1)
        return cfg


@dataclass
class LiouvilleConfig(RunConfig):
    dimensions: List[int] = field(default_factory=lambda: [2, 3])
    nodes: Dict[int, int] = field(default_factory=lambda: {2: 33, 3: 17})
    families: List[str] = field(default_factory=lambda: ['quad_iso', 'quad_aniso', 'quad_rotated'])
    residual_tolerance: float = 1e-8

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LiouvilleConfig":
        from experiments.boundary import quadratic_families

        _check_schema(data)
        _check_keys(data, cls)
        cfg = cls(seed=validate_int('seed', data.get('seed', Config.DEFAULT_SEED), minimum=0),
                  out_dir=str(data.get('out_dir', '.')))
        cfg.dimensions = validate_int_list('dimensions', data.get('dimensions', cfg.dimensions), minimum=2)
        nodes = data.get('nodes', {str(k): v for k, v in cfg.nodes.items()})
        if not isinstance(nodes, dict):
            raise ConfigError("nodes must map dimensions to node counts")
        cfg.nodes = {}
        for n in cfg.dimensions:
            entry = nodes.get(str(n), nodes.get(n))
            if entry is None:
                raise ConfigError(f"nodes has no entry for dimension {n}")
            cfg.nodes[n] = validate_node_count(f"nodes[{n}]", entry)
        cfg.families = validate_choices('families', data.get('families', cfg.families), quadratic_families())
        cfg.residual_tolerance = validate_positive('residual_tolerance',
                                                   data.get('residual_tolerance', cfg.residual_tolerance))
        return cfg

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['nodes'] = {str(k): v for k, v in self.nodes.items()}
        return data


@dataclass
class InteriorConfig(RunConfig):
    dimensions: List[int] = field(default_factory=lambda: [2, 3])
    resolutions: Dict[int, List[int]] = field(default_factory=lambda: {2: [17, 33, 65], 3: [5, 9, 17]})
    families: List[str] = field(default_factory=lambda: ['quad_iso', 'wave', 'harmonic_cubic'])
    half_width: float = 1.0
    stress_factor: float = 10.0
    drift_tolerance: float = 0.02

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InteriorConfig":
        from experiments.boundary import BOUNDARY_FAMILIES

        _check_schema(data)
        _check_keys(data, cls)
        cfg = cls(seed=validate_int('seed', data.get('seed', Config.DEFAULT_SEED), minimum=0),
                  out_dir=str(data.get('out_dir', '.')))
        cfg.dimensions = validate_int_list('dimensions', data.get('dimensions', cfg.dimensions), minimum=2)
        cfg.resolutions = _resolutions('resolutions',
                                       data.get('resolutions', {str(k): v for k, v in cfg.resolutions.items()}),
                                       cfg.dimensions)
        cfg.families = validate_choices('families', data.get('families', cfg.families), BOUNDARY_FAMILIES)
        cfg.half_width = validate_positive('half_width', data.get('half_width', cfg.half_width))
        cfg.stress_factor = validate_positive('stress_factor', data.get('stress_factor', cfg.stress_factor))
        cfg.drift_tolerance = validate_positive('drift_tolerance',
                                                data.get('drift_tolerance', cfg.drift_tolerance))
        return cfg

    def to_dict(self) -> dict:
        data = super().to_dict()
        data['resolutions'] = {str(k): v for k, v in self.resolutions.items()}
        return data
