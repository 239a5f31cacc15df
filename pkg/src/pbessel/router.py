"""Automatic method selection between series and integral routes.

The defining series is exact but suffers catastrophic cancellation as r
grows: summed in double precision it loses roughly r digits of accuracy
(the largest term grows like e^r while the sum decays).  The series
route here runs in extended precision, so it stays correct at any r,
but its cost grows with r while the integral representations stay flat.
The router switches to the integral routes past a fixed radius and
records which route produced each value.
"""
from __future__ import annotations

import math

from .special import DomainError, Method, PExponent, ValueWithError
from .series import pbessel_complex, pbessel_series
from .integrals import pbessel_axis, pbessel_thm13, pbessel_thm13_order0

__all__ = ["SERIES_RADIUS_LIMIT", "method_router", "is_axis_angle"]

# beyond this radius the extended-precision series needs > ~60 working
# digits and the integral routes are both cheaper and flatter in cost
SERIES_RADIUS_LIMIT = 30.0

_AXIS_SNAP = 1e-12


def is_axis_angle(phi: float) -> bool:
    """True when phi is a multiple of pi/2 (a coordinate-axis direction)."""
    k = round(phi / (math.pi / 2.0))
    return abs(phi - k * math.pi / 2.0) <= _AXIS_SNAP


def method_router(p: PExponent, omega: float, phi: float, r_or_z,
                  tol: float = 1e-9) -> ValueWithError:
    """Evaluate the p-Bessel function by the cheapest adequate route.

    Small real radii and all complex arguments go through the series
    (extended precision absorbs the cancellation).  Large real radii go
    through the axis integral on coordinate-axis directions, otherwise
    the double-integral representation (with its order-zero variant).
    The chosen route is recorded in the result's `method` field.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if isinstance(r_or_z, complex):
        return pbessel_complex(p, omega, phi, r_or_z, tol=tol)
    r = float(r_or_z)
    if r < 0:
        raise DomainError(f"real radius must be >= 0, got {r}")
    if r <= SERIES_RADIUS_LIMIT:
        return pbessel_series(p, omega, phi, r, tol=tol)
    if is_axis_angle(phi):
        return pbessel_axis(p, omega, r)
    if omega == 0.0:
        return pbessel_thm13_order0(p, phi, r)
    return pbessel_thm13(p, omega, phi, r)
