"""Envelope bounds for orthonormal Jacobi polynomials and tools that check them."""

__version__ = "0.1.0"

from .params import (  # noqa: E402
    ConsistencyError,
    DerivedParams,
    DomainError,
    Interval,
    JacobiParams,
    delta_interval,
    derive_params,
)
from .jacobi import eval_jacobi, eval_M, eval_Z, log_norm  # noqa: E402

__all__ = [
    "__version__",
    "ConsistencyError",
    "DerivedParams",
    "DomainError",
    "Interval",
    "JacobiParams",
    "delta_interval",
    "derive_params",
    "eval_jacobi",
    "eval_M",
    "eval_Z",
    "log_norm",
]
