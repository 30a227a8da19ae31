from typing import Any, Iterable, List

from models.errors import ConfigError


def validate_positive(name: str, value: Any) -> float:
    """Positive finite real"""
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not number > 0 or number == float('inf'):
        raise ConfigError(f"{name} must be positive and finite, got {value!r}")
    return number


def validate_int(name: str, value: Any, minimum: int = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def validate_int_list(name: str, value: Any, minimum: int = None) -> List[int]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list of integers")
    return [validate_int(f"{name}[{i}]", v, minimum) for i, v in enumerate(value)]


def validate_node_count(name: str, value: Any) -> int:
    """Odd node count >= 5 so the origin is a grid node"""
    m = validate_int(name, value, minimum=5)
    if m % 2 == 0:
        raise ConfigError(f"{name} must be odd, got {m}")
    return m


def validate_choices(name: str, values: Any, known: Iterable[str]) -> List[str]:
    known = set(known)
    if not isinstance(values, list) or not values:
        raise ConfigError(f"{name} must be a non-empty list")
    unknown = [v for v in values if v not in known]
    if unknown:
        raise ConfigError(f"{name} has unknown entries {unknown}; known: {sorted(known)}")
    return list(values)
