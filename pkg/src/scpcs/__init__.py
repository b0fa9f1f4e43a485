"""Set covering with conflict penalties: model, transforms, solvers, harness."""

from .core import (
    Instance,
    InfeasibleInstanceError,
    InvalidSolutionError,
    ObjectiveBreakdown,
    ScpError,
    Solution,
    active_conflicts,
    evaluate,
    is_cover,
    validate_instance,
)

__all__ = [
    "Instance",
    "InfeasibleInstanceError",
    "InvalidSolutionError",
    "ObjectiveBreakdown",
    "ScpError",
    "Solution",
    "active_conflicts",
    "evaluate",
    "is_cover",
    "validate_instance",
]

__version__ = "0.1.0"
