"""Power-series evaluation of the p-Bessel family.

All sums run in mpmath working precision scaled with the argument, because
the alternating series suffers e^r-scale cancellation while the result
stays O(1).  Every result carries a certified truncation tail plus a
cancellation penalty of eps_work * max_k |t_k| in its error estimate.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Union

import mpmath as mp

from .phi import AngleLike, DistortedAngle, build_phi_table, _coerce_angle
from .special import (
    DomainError,
    Method,
    PExponent,
    UnsupportedRepresentationError,
    ValueWithError,
)

__all__ = [
    "Order",
    "CutComplex",
    "PlanePoint",
    "plane_point_from_angle",
    "pbessel_series",
    "pbessel_xy_series",
    "pbessel_complex",
    "p_cosine",
    "p_sine",
    "pbessel_order_minus_recip",
    "series_coefficients",
]

_MAX_DPS = 220  # precision ceiling; beyond it results are flagged
_MAX_TERMS = 4000


@dataclass(frozen=True)
class Order:
    """Complex order admissible for series evaluation: Re > 0 or exactly 0."""

    omega: complex
    real_part_nonneg: bool = True

    def __post_init__(self) -> None:
        w = complex(self.omega)
        if not (w.real > 0.0 or w == 0.0):
            raise DomainError(
                f"order must satisfy Re(omega) > 0 or omega = 0, got {w}"
            )
        object.__setattr__(self, "real_part_nonneg", w.real >= 0.0)


@dataclass(frozen=True)
class CutComplex:
    """A complex argument restricted to the plane cut along (-inf, 0]."""

    z: complex

    def __post_init__(self) -> None:
        z = complex(self.z)
        if z.imag == 0.0 and z.real <= 0.0:
            raise DomainError(f"argument {z} lies on the branch cut (-inf, 0]")


@dataclass(frozen=True)
class PlanePoint:
    x1: float
    x2: float
    p_norm: float

    @classmethod
    def build(cls, p: PExponent, x1: float, x2: float) -> "PlanePoint":
        pv = p.p
        norm = (abs(x1) ** pv + abs(x2) ** pv) ** (1.0 / pv)
        return cls(x1=float(x1), x2=float(x2), p_norm=norm)


def plane_point_from_angle(p: PExponent, r: float, phi: float) -> PlanePoint:
    """The distorted-polar map (r, phi) -> x on the p-circle of radius r."""
    c, s = math.cos(phi), math.sin(phi)
    e = 2.0 / p.p
    x1 = math.copysign(r * abs(c) ** e, c) if abs(c) > 1e-15 else 0.0
    x2 = math.copysign(r * abs(s) ** e, s) if abs(s) > 1e-15 else 0.0
    return PlanePoint(x1=x1, x2=x2, p_norm=r)


def _dps_for(scale: float) -> int:
    return min(_MAX_DPS, 30 + int(0.5 * scale))


def _gamma_ratio_step(q: int, base) -> "mp.mpf":
    """Gamma(base + q) / Gamma(base) as a finite product (q = 2/p integer)."""
    out = mp.mpf(1) if not isinstance(base, mp.mpc) else mp.mpc(1)
    for j in range(q):
        out = out * (base + j)
    return out


def _sum_pbessel_terms(p: PExponent, omega, phis, z, tol: float, dps: int):
    """Shared alternating-sum kernel for the defining series.

    Returns (total, tail_bound, max_term, n_terms).  `omega` and `z` may be
    mpf or mpc; `phis` is an indexable of high-precision coefficients which
    is extended on demand by the caller-provided table.
    """
    q = p.q
    half = z / 2
    w2 = half * half
    pref = mp.power(mp.mpf(2) / p.p, 2 + omega) * mp.pi / mp.gamma(mp.mpf(1) / p.p) ** 2
    if z == 0:
        if omega == 0:
            t0 = pref * phis[0] / mp.gamma(mp.mpf(q))
            return t0, mp.mpf(0), abs(t0), 1
        return mp.mpf(0), mp.mpf(0), mp.mpf(0), 1
    t = pref * mp.power(half, omega) * phis[0] / mp.gamma(q + omega)
    total = t
    max_term = abs(t)
    k = 0
    while True:
        base = mp.mpf(2 * (k + 1)) / p.p + omega
        t_next = -t * w2 * (phis[k + 1] / phis[k]) / ((k + 1) * _gamma_ratio_step(q, base))
        if abs(t) < tol / 10 and abs(t_next) <= abs(t) / 2:
            # geometric tail with ratio <= 1/2 from here on
            return total, 2 * abs(t_next), max_term, k + 1
        t = t_next
        total += t
        max_term = max(max_term, abs(t))
        k += 1
        if k >= _MAX_TERMS:  # pragma: no cover - safety net
            return total, abs(t), max_term, k


def _finish(total, tail, max_term, dps: int, tol: float, method: Method,
            complex_out: bool) -> ValueWithError:
    eps_work = mp.mpf(10) ** (-dps + 2)
    err = float(tail + eps_work * max_term)
    value = complex(total) if complex_out else float(mp.re(total))
    flagged = err > tol
    note = "cancellation exceeds requested tolerance; use an integral route" if flagged else ""
    return ValueWithError(value, err, method, flagged=flagged, note=note)


def pbessel_series(p: PExponent, omega: float, phi: AngleLike, r: float,
                   tol: float = 1e-12) -> ValueWithError:
    """Defining power series at real order omega >= 0 and radius r >= 0."""
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    if omega < 0:
        raise DomainError(
            f"negative order {omega} not defined; order -1/p is available via "
            "pbessel_order_minus_recip"
        )
    if tol <= 0:
        raise DomainError("tol must be positive")
    ang = _coerce_angle(p, phi)
    dps = _dps_for(r)
    k_guess = 40 + int(2.5 * r)
    table = build_phi_table(p, ang, k_guess, dps=dps)
    with mp.workdps(dps):
        total, tail, max_term, n = _sum_pbessel_terms(
            p, mp.mpf(omega), _GrowingPhi(p, ang, table, dps), mp.mpf(r), tol, dps
        )
        return _finish(total, tail, max_term, dps, tol, Method.SERIES, complex_out=False)


class _GrowingPhi:
    """Indexable view over a coefficient table that extends itself on demand."""

    def __init__(self, p: PExponent, ang: DistortedAngle, table, dps: int) -> None:
        self._p = p
        self._ang = ang
        self._vals = list(table.values)
        self._dps = dps

    def __getitem__(self, k: int):
        while k >= len(self._vals):
            bigger = build_phi_table(self._p, self._ang, 2 * len(self._vals), dps=self._dps)
            self._vals = list(bigger.values)
        return self._vals[k]


def pbessel_complex(p: PExponent, omega: Union[Order, complex, float], phi: AngleLike,
                    z: Union[CutComplex, complex], tol: float = 1e-12) -> ValueWithError:
    """Series evaluation at complex argument off the cut (-inf, 0].

    Powers z^(2k+omega) use the principal branch: z^omega is principal and
    the remaining factor is the integer power (z/2)^(2k).
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    if not isinstance(omega, Order):
        omega = Order(complex(omega))
    if not isinstance(z, CutComplex):
        z = CutComplex(complex(z))
    ang = _coerce_angle(p, phi)
    zc = complex(z.z)
    dps = _dps_for(abs(zc))
    table = build_phi_table(p, ang, 40 + int(2.5 * abs(zc)), dps=dps)
    with mp.workdps(dps):
        w = mp.mpc(omega.omega) if complex(omega.omega).imag != 0 else mp.mpf(
            complex(omega.omega).real
        )
        total, tail, max_term, n = _sum_pbessel_terms(
            p, w, _GrowingPhi(p, ang, table, dps), mp.mpc(zc), tol, dps
        )
        return _finish(total, tail, max_term, dps, tol, Method.SERIES, complex_out=True)


def pbessel_xy_series(p: PExponent, omega: float, x: PlanePoint,
                      tol: float = 1e-12) -> ValueWithError:
    """Two-variable double series, summed by anti-diagonals m1 + m2 = k.

    Within an anti-diagonal the pair terms are accumulated larger-first for
    deterministic rounding.  Independent of the single-variable route: it
    never touches the angular coefficient table.
    """
    if omega < 0:
        raise DomainError(f"negative order {omega} not defined")
    if tol <= 0:
        raise DomainError("tol must be positive")
    q = p.q
    r = x.p_norm
    dps = _dps_for(r)
    with mp.workdps(dps):
        x1 = mp.mpf(x.x1)
        x2 = mp.mpf(x.x2)
        w = mp.mpf(omega)
        pref = (
            mp.power(mp.mpf(2) / p.p, 2)
            * mp.power(mp.mpf(r), w)
            / (mp.power(mp.mpf(p.p), w) * mp.gamma(mp.mpf(1) / p.p) ** 2)
        )
        # row factors g(m) = Gamma((2m+1)/p) x_i^(2m) / (2m)!
        def row(xi, m_max):
            g = [mp.gamma(mp.mpf(1) / p.p)]
            xi2 = xi * xi
            for m in range(1, m_max + 1):
                base = mp.mpf(2 * m - 1) / p.p
                g.append(g[-1] * _gamma_ratio_step(q, base) * xi2 / ((2 * m - 1) * (2 * m)))
            return g

        m_max = 40 + int(2.5 * r)
        g1 = row(x1, m_max)
        g2 = row(x2, m_max)

        def extend(m_new):
            nonlocal g1, g2, m_max
            g1 = row(x1, m_new)
            g2 = row(x2, m_new)
            m_max = m_new

        inv_gamma_k = 1 / mp.gamma(q + w)  # 1/Gamma(2(k+1)/p + omega)
        total = mp.mpf(0)
        max_term = mp.mpf(0)
        t_prev = None
        k = 0
        while True:
            if k > m_max:
                extend(2 * m_max)
            pairs = sorted(
                (g1[m1] * g2[k - m1] for m1 in range(k + 1)),
                key=abs,
                reverse=True,
            )
            diag = mp.mpf(0)
            for v in pairs:
                diag += v
            t = pref * ((-1) ** k) * diag * inv_gamma_k
            if t_prev is not None and abs(t_prev) < tol / 10 and abs(t) <= abs(t_prev) / 2:
                tail = 2 * abs(t)
                break
            total += t
            max_term = max(max_term, abs(t))
            t_prev = t
            base = mp.mpf(2 * (k + 1)) / p.p + w
            inv_gamma_k /= _gamma_ratio_step(q, base)
            k += 1
            if k >= _MAX_TERMS:  # pragma: no cover - safety net
                tail = abs(t)
                break
        return _finish(total, tail, max_term, dps, tol, Method.SERIES, complex_out=False)


def _cos_sin_sum(p: PExponent, phi: AngleLike, z: complex, tol: float, odd: bool):
    """Shared kernel for the p-cosine (odd=False) / p-sine (odd=True) series."""
    if not p.q_odd:
        raise UnsupportedRepresentationError(
            f"p-cosine/p-sine require 2/p odd, got 2/p = {p.q}"
        )
    if tol <= 0:
        raise DomainError("tol must be positive")
    ang = _coerce_angle(p, phi)
    zc = complex(z)
    dps = _dps_for(abs(zc))
    table = build_phi_table(p, ang, 40 + int(2.5 * abs(zc)), dps=dps)
    phis = _GrowingPhi(p, ang, table, dps)
    q = p.q
    with mp.workdps(dps):
        zz = mp.mpc(zc) if zc.imag != 0 else mp.mpf(zc.real)
        z2 = zz * zz
        shift = mp.mpf(3 if odd else 1) / p.p
        # c_0 coefficient
        t = mp.sqrt(mp.pi) * phis[0] / mp.gamma(shift)
        if odd:
            t = t * zz / 2
        total = t
        max_term = abs(t)
        k = 0
        while True:
            base = mp.mpf(2 * k) / p.p + shift
            t_next = (
                -t * z2 * (phis[k + 1] / phis[k]) / (4 * (k + 1) * _gamma_ratio_step(q, base))
            )
            if abs(t) < tol / 10 and abs(t_next) <= abs(t) / 2:
                tail = 2 * abs(t_next)
                break
            t = t_next
            total += t
            max_term = max(max_term, abs(t))
            k += 1
            if k >= _MAX_TERMS:  # pragma: no cover - safety net
                tail = abs(t)
                break
        eps_work = mp.mpf(10) ** (-dps + 2)
        err = float(tail + eps_work * max_term)
        return complex(total), err


def p_cosine(p: PExponent, phi: AngleLike, z: complex, tol: float = 1e-12) -> complex:
    """Entire p-cosine; collapses to cos(z) at p = 2."""
    value, _err = _cos_sin_sum(p, phi, z, tol, odd=False)
    return value


def p_sine(p: PExponent, phi: AngleLike, z: complex, tol: float = 1e-12) -> complex:
    """Entire p-sine; collapses to sin(z) at p = 2."""
    value, _err = _cos_sin_sum(p, phi, z, tol, odd=True)
    return value


def pbessel_order_minus_recip(p: PExponent, phi: AngleLike, z: Union[CutComplex, complex],
                              tol: float = 1e-12) -> ValueWithError:
    """The only admitted negative order, omega = -1/p, via the p-cosine:

        J_{-1/p} (z) = 4 sqrt(pi) / (p^(2-1/p) Gamma(1/p)^2) * cos_phi(z) / z^(1/p)
    """
    if not isinstance(z, CutComplex):
        z = CutComplex(complex(z))
    zc = complex(z.z)
    value, err = _cos_sin_sum(p, phi, zc, tol, odd=False)
    pv = p.p
    c = 4.0 * math.sqrt(math.pi) / (pv ** (2.0 - 1.0 / pv) * math.gamma(1.0 / pv) ** 2)
    zpow = cmath.exp((1.0 / pv) * cmath.log(zc))
    out = c * value / zpow
    if zc.imag == 0 and zc.real > 0:
        out = complex(out.real, 0.0)
    return ValueWithError(out, err * c / abs(zpow), Method.SERIES)


def series_coefficients(p: PExponent, omega: float, phi: AngleLike, k_max: int,
                        dps: int = 40) -> list:
    """High-precision coefficients a_k with  J(r) = sum_k a_k r^(2k + omega).

    Used by the fractional-operator module to apply order-shifting
    operators term by term (each operator acts on monomials by an exact
    Gamma-ratio eigenvalue).
    """
    if omega < 0:
        raise DomainError(f"negative order {omega} not defined")
    q = p.q
    ang = _coerce_angle(p, phi)
    table = build_phi_table(p, ang, k_max, dps=dps)
    with mp.workdps(dps):
        w = mp.mpf(omega)
        pref = mp.power(mp.mpf(2) / p.p, 2 + w) * mp.pi / mp.gamma(mp.mpf(1) / p.p) ** 2
        a = pref * table[0] / (mp.gamma(q + w) * mp.power(2, w))
        out = [a]
        for k in range(1, k_max + 1):
            base = mp.mpf(2 * k) / p.p + w
            a = -a * (table[k] / table[k - 1]) / (4 * k * _gamma_ratio_step(q, base))
            out.append(a)
        return out
