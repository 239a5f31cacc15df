"""Distorted-angle coefficients coupling angular anisotropy into the series.

Two independent closed forms are implemented (a Beta-ratio sum and a
Gamma-product sum over split indices); their agreement is one of the
package's core self-checks.  Tables are immutable and memoized per
(q, angle, precision).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import mpmath as mp

from .special import DomainError, PExponent, log_gamma

__all__ = ["DistortedAngle", "PhiTable", "phi_beta_form", "phi_gamma_form", "build_phi_table"]


@dataclass(frozen=True)
class DistortedAngle:
    """An angle together with its p-distorted cosine/sine powers.

    cos_pow = |cos phi|^(4/p) and sin_pow = |sin phi|^(4/p); both lie in
    [0, 1] because 4/p = 2q is an even integer.
    """

    phi: float
    cos_pow: float
    sin_pow: float

    @classmethod
    def build(cls, p: PExponent, phi: float) -> "DistortedAngle":
        c, s = math.cos(phi), math.sin(phi)
        # snap values that are zero up to the trig roundoff of pi multiples
        if abs(c) < 1e-15:
            c = 0.0
        if abs(s) < 1e-15:
            s = 0.0
        return cls(phi=phi, cos_pow=(c * c) ** p.q, sin_pow=(s * s) ** p.q)


AngleLike = Union[DistortedAngle, float]


def _coerce_angle(p: PExponent, phi: AngleLike) -> DistortedAngle:
    if isinstance(phi, DistortedAngle):
        return phi
    return DistortedAngle.build(p, float(phi))


def phi_beta_form(p: PExponent, k: int, phi: AngleLike) -> float:
    """Beta-ratio form of the coefficient: finite sum over n = 0..k.

    Each term is assembled in log space and exponentiated; terms with a
    vanished power factor are skipped (the 0^0 = 1 axis convention keeps
    exactly one term alive on the axes).
    """
    if k < 0:
        raise DomainError("k must be a nonnegative integer")
    ang = _coerce_angle(p, phi)
    q = p.q
    pv = p.p
    lead = log_gamma(q * (k + 1))
    total = 0.0
    for n in range(k + 1):
        m = k - n
        if (ang.cos_pow == 0.0 and n > 0) or (ang.sin_pow == 0.0 and m > 0):
            continue
        lg = (
            lead
            - log_gamma(n + 1)
            - log_gamma(m + 1)
            + log_gamma((2.0 / pv) * (n + 0.5))
            + log_gamma((2.0 / pv) * (m + 0.5))
            - log_gamma(q * (k + 1))
            - log_gamma(n + 0.5)
            - log_gamma(m + 0.5)
            + log_gamma(k + 1.0)
        )
        pw = 1.0
        if n > 0:
            pw *= ang.cos_pow ** n
        if m > 0:
            pw *= ang.sin_pow ** m
        total += math.exp(lg) * pw
    return total


def phi_gamma_form(p: PExponent, k: int, phi: AngleLike) -> float:
    """Gamma-product form: (k! 4^k / pi) * sum over m1 + m2 = k."""
    if k < 0:
        raise DomainError("k must be a nonnegative integer")
    ang = _coerce_angle(p, phi)
    pv = p.p
    lead = log_gamma(k + 1.0) + 2.0 * k * math.log(2.0) - math.log(math.pi)
    total = 0.0
    for m1 in range(k + 1):
        m2 = k - m1
        if (ang.cos_pow == 0.0 and m1 > 0) or (ang.sin_pow == 0.0 and m2 > 0):
            continue
        lg = (
            lead
            + log_gamma((2.0 * m1 + 1.0) / pv)
            + log_gamma((2.0 * m2 + 1.0) / pv)
            - log_gamma(2.0 * m1 + 1.0)
            - log_gamma(2.0 * m2 + 1.0)
        )
        pw = 1.0
        if m1 > 0:
            pw *= ang.cos_pow ** m1
        if m2 > 0:
            pw *= ang.sin_pow ** m2
        total += math.exp(lg) * pw
    return total


class PhiTable:
    """Immutable memoized sequence of coefficients for one (p, angle)."""

    def __init__(self, p: PExponent, phi: AngleLike, values: Sequence) -> None:
        self.p = p
        self.angle = _coerce_angle(p, phi)
        self._values = tuple(values)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, k: int):
        return self._values[k]

    @property
    def values(self) -> tuple:
        return self._values


_TABLE_CACHE: dict = {}


def _phi_values_mp(p: PExponent, ang: DistortedAngle, k_max: int, dps: int) -> tuple:
    """Gamma-product form evaluated in mpmath working precision.

    Needed when the coefficients feed high-precision series summation; the
    sum has only nonnegative terms, so precision carries through.
    """
    q = p.q
    with mp.workdps(dps):
        cp = mp.mpf(math.cos(ang.phi)) ** 2 if ang.cos_pow != 0.0 else mp.mpf(0)
        sp = mp.mpf(math.sin(ang.phi)) ** 2 if ang.sin_pow != 0.0 else mp.mpf(0)
        cp = cp ** q
        sp = sp ** q
        # row factors g(m) = Gamma((2m+1)/p) / (2m)! * pow^m
        def rows(powval):
            g = [mp.gamma(mp.mpf(1) / p.p)]
            for m in range(1, k_max + 1):
                x = mp.mpf(2 * m - 1) / p.p
                ratio = mp.mpf(1)
                for j in range(q):
                    ratio *= x + j
                g.append(g[-1] * ratio * powval / ((2 * m - 1) * (2 * m)))
            return g

        gc = rows(cp)
        gs = rows(sp)
        vals = []
        fact_pow = mp.mpf(1) / mp.pi  # k! 4^k / pi accumulator
        for k in range(k_max + 1):
            if k > 0:
                fact_pow *= 4 * k
            acc = mp.mpf(0)
            for m1 in range(k + 1):
                if (ang.cos_pow == 0.0 and m1 > 0) or (ang.sin_pow == 0.0 and k - m1 > 0):
                    continue
                acc += gc[m1] * gs[k - m1]
            vals.append(fact_pow * acc)
        return tuple(vals)


def build_phi_table(p: PExponent, phi: AngleLike, k_max: int,
                    dps: Optional[int] = None) -> PhiTable:
    """Build (or fetch from cache) the coefficient table for k = 0..k_max.

    With `dps` set the entries are mpmath floats at that precision,
    otherwise doubles from the Beta form.  Cache keys quantize the angle
    at 1e-15.
    """
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    ang = _coerce_angle(p, phi)
    key = (p.q, round(ang.phi * 1e15), dps)
    cached = _TABLE_CACHE.get(key)
    if cached is not None and len(cached) > k_max:
        return PhiTable(p, ang, cached[: k_max + 1])
    if dps is None:
        vals = tuple(phi_beta_form(p, k, ang) for k in range(k_max + 1))
    else:
        vals = _phi_values_mp(p, ang, k_max, dps)
    _TABLE_CACHE[key] = vals
    return PhiTable(p, ang, vals)
