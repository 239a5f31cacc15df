"""p-Bessel functions on Lame-curve domains: series and integral
representations, fractional order shifts, asymptotics, and lattice-point
discrepancy sums."""

from .special import (
    BudgetExceededError,
    DomainError,
    Method,
    PExponent,
    QuadratureSpec,
    UnsupportedRepresentationError,
    ValueWithError,
)

__all__ = [
    "BudgetExceededError",
    "DomainError",
    "Method",
    "PExponent",
    "QuadratureSpec",
    "UnsupportedRepresentationError",
    "ValueWithError",
]

__version__ = "0.1.0"
