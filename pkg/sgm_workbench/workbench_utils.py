"""Shared plumbing: settings, verdicts, errors and argument allow-lists."""

import contextlib
import dataclasses
from enum import Enum
from functools import wraps
import threading
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, TypeVar


class CoefficientMismatchError(ValueError):
    """Operands live over different coefficient rings."""


class DegreeCapError(ValueError):
    """A degree exceeds the configured cap."""


class TermError(ValueError):
    """An ill-formed polyhedron term, optionally naming the violated clause."""

    def __init__(self, message: str, clause: Optional[str] = None) -> None:
        if clause is not None:
            message = f"{clause} {message}"
        super().__init__(message)
        self.clause = clause


class HypothesisError(ValueError):
    """A theorem hypothesis does not hold for the given data."""

    def __init__(self, message: str, deficit: Optional[int] = None) -> None:
        super().__init__(message)
        self.deficit = deficit


class StructuralError(RuntimeError):
    """Internal inconsistency, such as a boundary that does not square to zero."""


class VerdictStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    NO_CONSTRAINT = "no constraint"
    UNDECIDED = "not decided by degree"


@dataclasses.dataclass(frozen=True)
class Verdict:
    check: str
    status: VerdictStatus
    detail: str = ""
    witness: Optional[Any] = None

    @property
    def failed(self) -> bool:
        return self.status is VerdictStatus.FAIL

    def to_json(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "status": self.status.value,
            "detail": self.detail,
            "witness": None if self.witness is None else str(self.witness),
        }


@dataclasses.dataclass(frozen=True)
class WorkbenchSettings:
    degree_cap: int = 32
    max_factors: int = 4
    index_mode: str = "literal"
    simplicial_dim_cap: int = 6
    corpus_max_atoms: int = 3
    corpus_sphere_dims: Tuple[int, ...] = (1, 2, 3, 4, 5)
    show_progress: bool = True

    def __post_init__(self) -> None:
        if self.degree_cap < 1:
            raise ValueError(f"degree_cap must be positive, got {self.degree_cap}")
        if self.max_factors < 1:
            raise ValueError(f"max_factors must be positive, got {self.max_factors}")
        if self.index_mode not in INDEX_MODES:
            raise ValueError(
                f"Invalid index_mode '{self.index_mode}'. Allowed values are {INDEX_MODES}."
            )


INDEX_MODES = ["literal", "triangular"]

_settings_lock = threading.Lock()
_settings = WorkbenchSettings()


def get_settings() -> WorkbenchSettings:
    return _settings


def configure(**overrides: Any) -> WorkbenchSettings:
    """Replace the process-wide settings with a copy carrying ``overrides``."""
    global _settings
    with _settings_lock:
        _settings = dataclasses.replace(_settings, **overrides)
        return _settings


@contextlib.contextmanager
def settings_override(**overrides: Any) -> Iterator[WorkbenchSettings]:
    """Temporarily apply ``overrides``; restores the previous settings on exit."""
    global _settings
    previous = _settings
    try:
        yield configure(**overrides)
    finally:
        with _settings_lock:
            _settings = previous


def check_degree(degree: int, what: str = "degree") -> int:
    cap = get_settings().degree_cap
    if degree > cap:
        raise DegreeCapError(f"{what} {degree} exceeds the degree cap {cap}")
    return degree


T = TypeVar("T", bound=Callable[..., Any])


def allowed_vals(**constraints: List[Any]) -> Callable[[T], T]:
    """
    Decorator to enforce allow-lists on specific function arguments.

    :param constraints: Keyword arguments specifying the allowed values for each argument.
                        E.g., index_mode=["literal", "triangular"]
    """

    def decorator(func: T) -> T:
        arg_names: List[str] = list(
            func.__code__.co_varnames[: func.__code__.co_argcount]
        )

        allowed_values: Dict[str, Optional[List[Any]]] = {
            arg: constraints.get(arg, None) for arg in arg_names
        }
        setattr(func, "allowed_values", allowed_values)

        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            provided_args: Dict[str, Any] = dict(zip(arg_names, args))
            provided_args.update(kwargs)

            for arg_name, allowed in allowed_values.items():
                if arg_name in provided_args:
                    if allowed is not None and provided_args[arg_name] not in allowed:
                        raise ValueError(
                            f"Invalid value for '{arg_name}'. Allowed values are {allowed}."
                        )

            return func(*args, **kwargs)

        return wrapper  # type: ignore

    return decorator
