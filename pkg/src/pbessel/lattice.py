"""Lattice point counts on p-discs and Hardy-type oscillatory sums.

Exact integer-pair counting inside |n1|^p + |n2|^p <= r^p, the smooth
area term, the discrepancy between them, enumeration of distorted
angles of lattice points lying exactly on a p-circle, and two truncated
oscillatory identities that reconstruct the discrepancy from Bessel-type
sums: the classical circle identity (p = 2) and its anisotropic
generalization weighted by the distorted-angle sets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import mpmath as mp
import numpy as np

from .special import (
    BudgetExceededError,
    DomainError,
    PExponent,
    bessel_j_vec,
    classical_bessel_j,
    gamma,
    log_gamma,
)
from .router import method_router

__all__ = [
    "LatticeReport",
    "AngleSet",
    "RTable",
    "count_lattice_points",
    "area_term",
    "angles_on_circle",
    "r_function",
    "hardy_partial_sum_p2",
    "hardy_partial_sum_general",
    "generalized_discrepancy_spotcheck",
]

# near-tie window (relative) below which the float comparison escalates
# to 60-digit arithmetic; p = 2/q makes |n|^p irrational in general, so
# a bare float equality test is unsafe on boundary points
_TIE_REL = 1e-9


def _power_sum_cmp(p: PExponent, n1: int, n2: int, s: float) -> int:
    """Sign of |n1|^p + |n2|^p - s, escalating near ties.

    `s` is taken at its exact binary-float value; the escalation
    recomputes both sides at 60 digits with the exact rational exponent
    2/q and calls the pair a boundary point only below 1e-40 relative.
    """
    pv = p.p
    lhs = abs(n1) ** pv + abs(n2) ** pv
    d = lhs - s
    if abs(d) > _TIE_REL * max(1.0, abs(s)):
        return -1 if d < 0 else 1
    with mp.workdps(60):
        e = mp.mpf(2) / p.q
        dd = mp.mpf(abs(n1)) ** e + mp.mpf(abs(n2)) ** e - mp.mpf(s)
        if abs(dd) < mp.mpf("1e-40") * max(1, abs(s)):
            return 0
        return -1 if dd < 0 else 1


@dataclass(frozen=True)
class LatticeReport:
    p: PExponent
    r: float
    count: int
    area_term: float
    discrepancy: float
    boundary_points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.count < 1:
            raise DomainError("a lattice report must count at least the origin")
        if self.discrepancy != self.count - self.area_term:
            raise DomainError("discrepancy must equal count - area_term")


@dataclass(frozen=True)
class AngleSet:
    """Distorted angles of lattice points exactly on the p-circle |n|_p^p = s."""

    p: PExponent
    s: float
    entries: tuple[tuple[float, tuple[int, int]], ...]

    def __post_init__(self) -> None:
        if self.s < 1.0:
            raise DomainError(f"angle sets are defined for s >= 1, got {self.s}")
        bound = 4 * int(self.s ** (1.0 / self.p.p) + 1e-12)
        if len(self.entries) > bound:
            raise DomainError(
                f"angle set size {len(self.entries)} exceeds the 4*floor(s^(1/p)) bound {bound}"
            )

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(e[0] for e in self.entries)


@dataclass(frozen=True)
class RTable:
    """R(k) = number of integer pairs with squared Euclidean norm k."""

    values: np.ndarray

    def __post_init__(self) -> None:
        if int(self.values[0]) != 1:
            raise DomainError("R(0) must be 1")

    def __getitem__(self, k: int) -> int:
        return int(self.values[k])

    @property
    def k_max(self) -> int:
        return len(self.values) - 1


def area_term(p: PExponent, r: float) -> float:
    """Area of the closed p-disc of radius r: (2/p) Gamma(1/p)^2 / Gamma(2/p) * r^2."""
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    pv = p.p
    c = (2.0 / pv) * math.exp(2.0 * log_gamma(1.0 / pv) - log_gamma(2.0 / pv))
    return c * r * r


def _column_top(p: PExponent, n1: int, s: float, guess: float) -> int:
    """Largest n2 >= 0 with |n1|^p + n2^p <= s (s = r^p)."""
    k = max(0, int(guess))
    while _power_sum_cmp(p, n1, k + 1, s) <= 0:
        k += 1
    while k > 0 and _power_sum_cmp(p, n1, k, s) > 0:
        k -= 1
    return k


def count_lattice_points(p: PExponent, r: float,
                         max_points: int = 20_000_000) -> LatticeReport:
    """Count integer pairs with |n|_p <= r by column scan.

    Boundary membership is decided by `_power_sum_cmp` (escalated
    comparison), and boundary points are reported separately so an
    open-region count is recoverable.
    """
    if r <= 0:
        raise DomainError(f"r must be > 0, got {r}")
    est = area_term(p, r) + 4.0 * r + 1.0
    if est > max_points:
        raise BudgetExceededError(
            f"~{est:.3g} lattice points exceeds the scan budget of {max_points}"
        )
    pv = p.p
    s = r ** pv
    m = _column_top(p, 0, s, r)
    boundary: set[tuple[int, int]] = set()
    total = 0
    for n1 in range(0, m + 1):
        t = max(s - n1 ** pv, 0.0)
        k = _column_top(p, n1, s, t ** (1.0 / pv))
        col = 2 * k + 1
        total += col if n1 == 0 else 2 * col
        if _power_sum_cmp(p, n1, k, s) == 0:
            for a, b in {(n1, k), (n1, -k), (-n1, k), (-n1, -k)}:
                boundary.add((a, b))
    area = area_term(p, r)
    return LatticeReport(
        p=p,
        r=r,
        count=total,
        area_term=area,
        discrepancy=total - area,
        boundary_points=tuple(sorted(boundary)),
    )


def _angle_of_pair(p: PExponent, n1: int, n2: int, s: float) -> float:
    """Distorted angle phi in [0, 2pi) with the signed reconstruction map."""
    c = math.sqrt(abs(n1) ** p.p / s)
    d = math.sqrt(abs(n2) ** p.p / s)
    phi = math.atan2(math.copysign(d, n2) if n2 else 0.0,
                     math.copysign(c, n1) if n1 else 0.0)
    return phi % (2.0 * math.pi)


def angles_on_circle(p: PExponent, s: float) -> AngleSet:
    """Enumerate lattice points with |n|_p^p = s and their distorted angles."""
    if s < 1.0:
        raise DomainError(f"angle sets are defined for s >= 1, got {s}")
    pv = p.p
    amax = _column_top(p, 0, s, s ** (1.0 / pv))
    points: set[tuple[int, int]] = set()
    for a in range(0, amax + 1):
        t = max(s - a ** pv, 0.0)
        b = _column_top(p, a, s, t ** (1.0 / pv))
        if _power_sum_cmp(p, a, b, s) == 0:
            for sx in (1, -1):
                for sy in (1, -1):
                    points.add((sx * a, sy * b))
    entries = sorted(
        ((_angle_of_pair(p, n1, n2, s), (n1, n2)) for n1, n2 in points),
        key=lambda e: e[0],
    )
    return AngleSet(p=p, s=s, entries=tuple(entries))


def r_function(k_max: int) -> RTable:
    """Exact table of R(k) for k = 0..k_max via a bounded double loop."""
    if k_max < 0:
        raise DomainError(f"k_max must be >= 0, got {k_max}")
    m = int(math.isqrt(k_max))
    i = np.arange(-m, m + 1)
    sq = (i[:, None] ** 2 + i[None, :] ** 2).ravel()
    counts = np.bincount(sq[sq <= k_max], minlength=k_max + 1)
    return RTable(values=counts)


def hardy_partial_sum_p2(r: float, K: int) -> float:
    """Truncated circle identity: r * sum_{k<=K} R(k) k^(-1/2) J_1(2 pi sqrt(k) r)."""
    if r <= 0:
        raise DomainError(f"r must be > 0, got {r}")
    if abs(r * r - round(r * r)) < 1e-12:
        raise DomainError(
            f"r^2 = {r * r} is an integer: the identity sits on a jump of the count there"
        )
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    if K == 0:
        return 0.0
    rt = r_function(K)
    k = np.nonzero(rt.values[1:])[0] + 1
    terms = rt.values[k] / np.sqrt(k) * bessel_j_vec(1.0, 2.0 * math.pi * np.sqrt(k) * r)
    return r * math.fsum(terms.tolist())


def _diamond_order1(x1: float, x2: float) -> float:
    """Closed form of the order-1 function at p = 1 on the mapped point."""
    if abs(x1 - x2) < 1e-7 * max(1.0, abs(x1)):
        return 4.0 * math.sin(0.5 * (x1 + x2)) * _sinc(0.5 * (x1 - x2))
    return 4.0 * (math.cos(x2) - math.cos(x1)) / (x1 - x2)


def _sinc(t: float) -> float:
    return math.sin(t) / t if t != 0.0 else 1.0


def hardy_partial_sum_general(
    p: PExponent,
    r: float,
    S: float,
    evaluator: Optional[Callable[[float, float], float]] = None,
    max_terms: int = 300_000,
) -> float:
    """Truncated anisotropic identity.

    (p Gamma(1/p)^2 / 2 pi) * r * sum over lattice points n != 0 with
    |n|_p^p <= S of s^(-1/p) * (order-1 function at angle phi(n),
    argument 2 pi s^(1/p) r), with s = |n|_p^p.  Points are grouped by
    the unordered pair {|n1|, |n2|} (which determines both s and the
    value, by the reflection and swap symmetries) with orbit weights
    4 or 8.  `evaluator(phi, arg)` overrides the order-1 evaluation.
    """
    if r <= 0:
        raise DomainError(f"r must be > 0, got {r}")
    if S < 1.0:
        raise DomainError(f"S must be >= 1, got {S}")
    pv = p.p
    est_pairs = (area_term(p, S ** (1.0 / pv)) + 4.0 * S ** (1.0 / pv)) / 8.0 + 2.0
    if est_pairs > max_terms:
        raise BudgetExceededError(
            f"~{est_pairs:.3g} lattice orbits exceeds the sum budget of {max_terms}"
        )
    amax = int(S ** (1.0 / pv) + 1e-9)
    while (amax + 1) ** pv <= S * (1.0 + 1e-12):
        amax += 1
    terms: list[float] = []
    for a in range(0, amax + 1):
        rem = S - a ** pv
        if rem < 0 and _power_sum_cmp(p, a, a, S) > 0:
            break
        bmax = _column_top(p, a, S, max(rem, 0.0) ** (1.0 / pv))
        for b in range(a, bmax + 1):
            if a == 0 and b == 0:
                continue
            s = a ** pv + b ** pv
            weight = 4.0 if (a == b or a == 0) else 8.0
            arg = 2.0 * math.pi * s ** (1.0 / pv) * r
            if evaluator is not None:
                phi = _angle_of_pair(p, a, b, s)
                val = evaluator(phi, arg)
            elif p.q == 1:
                val = classical_bessel_j(1.0, arg)
            elif p.q == 2:
                # mapped coordinates x_i = arg * (|n_i|^p / s)^(2/p) with
                # p = 1: x_i = arg * n_i / s
                val = _diamond_order1(arg * a / s, arg * b / s)
            else:
                phi = _angle_of_pair(p, a, b, s)
                val = method_router(p, 1.0, phi, arg).real
            terms.append(weight * s ** (-1.0 / pv) * val)
    pref = pv * math.exp(2.0 * log_gamma(1.0 / pv)) / (2.0 * math.pi) * r
    return pref * math.fsum(terms)


def _mean_value_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def generalized_discrepancy_spotcheck(
    p: PExponent,
    beta: float,
    s: float,
    x: tuple[float, float],
    S: int,
    n_nodes: int = 48,
) -> tuple[complex, complex]:
    """Both sides of the smoothed-discrepancy identity, independently.

    LHS: exact weighted lattice sum over |m|_p^p < s minus the 2D
    integral of the same weight over the open p-disc (closed form at
    x = 0, distorted-polar tensor quadrature otherwise).  RHS: the
    two-variable Bessel-type lattice series truncated at |n|^2 <= S^2.
    Returns (lhs, rhs) for comparison; equality is an identity of the
    underlying transform, so the gap measures truncation alone.
    """
    pv = p.p
    if beta <= -1.0:
        raise DomainError(f"beta must exceed -1, got {beta}")
    if s <= 0:
        raise DomainError(f"s must be > 0, got {s}")
    if s > 4.0 or max(abs(x[0]), abs(x[1])) > 1.0:
        raise BudgetExceededError(
            "spot check budgeted to s <= 4 and |x| components <= 1"
        )
    inv_gb = 1.0 / gamma(beta + 1.0)
    # exact finite sum over interior lattice points
    mmax = int(s ** (1.0 / pv)) + 1
    re_terms: list[float] = []
    im_terms: list[float] = []
    for m1 in range(-mmax, mmax + 1):
        for m2 in range(-mmax, mmax + 1):
            if _power_sum_cmp(p, m1, m2, s) < 0:
                w = (s - (abs(m1) ** pv + abs(m2) ** pv)) ** beta * inv_gb
                ph = 2.0 * math.pi * (x[0] * m1 + x[1] * m2)
                re_terms.append(w * math.cos(ph))
                im_terms.append(w * math.sin(ph))
    d_sum = complex(math.fsum(re_terms), math.fsum(im_terms))

    if x == (0.0, 0.0):
        c_p = (2.0 / pv) * math.exp(2.0 * log_gamma(1.0 / pv) - log_gamma(2.0 / pv))
        d_int = complex(
            (2.0 * c_p / pv) * s ** (beta + 2.0 / pv)
            * math.exp(log_gamma(2.0 / pv) + log_gamma(beta + 1.0) - log_gamma(2.0 / pv + beta + 1.0))
            * inv_gb,
            0.0,
        )
    else:
        d_int = _disc_integral(p, beta, s, x, n_nodes) * inv_gb
    lhs = d_sum - d_int

    # truncated lattice series of two-variable Bessel-type kernels
    scale = 2.0 * math.pi * s ** (1.0 / pv)
    re_t: list[float] = []
    for n1 in range(-S, S + 1):
        for n2 in range(-S, S + 1):
            if n1 * n1 + n2 * n2 > S * S or (n1 == 0 and n2 == 0):
                continue
            y1 = x[0] - n1
            y2 = x[1] - n2
            rn = (abs(y1) ** pv + abs(y2) ** pv) ** (1.0 / pv)
            arg = scale * rn
            if p.q == 1:
                jv = classical_bessel_j(beta + 1.0, scale * math.hypot(y1, y2))
            else:
                c = math.copysign((abs(y1) / rn) ** (pv / 2.0), y1) if y1 else 0.0
                d = math.copysign((abs(y2) / rn) ** (pv / 2.0), y2) if y2 else 0.0
                jv = method_router(p, beta + 1.0, math.atan2(d, c) % (2.0 * math.pi), arg).real
            re_t.append(jv / arg ** (beta + 1.0))
    rhs_real = (
        s ** (beta + 2.0 / pv)
        * pv ** (beta + 1.0)
        * math.exp(2.0 * log_gamma(1.0 / pv))
        * math.fsum(re_t)
    )
    # the kernel series is real-symmetric under n -> -n at real x, so the
    # truncated sum is real
    return lhs, complex(rhs_real, 0.0)


def _disc_integral(p: PExponent, beta: float, s: float, x: tuple[float, float],
                   n_nodes: int) -> complex:
    """int over |xi|_p^p < s of (s - |xi|_p^p)^beta e^(2 pi i x.xi) d xi.

    Distorted polar coordinates; the radial weight is absorbed by a
    Gauss-Jacobi rule, the angular factor |cos sin|^(2/p - 1) is smooth
    per quadrant (exponent q - 1 >= 0) and handled by Gauss-Legendre.
    """
    from .quadrature import gauss_jacobi_01

    pv = p.p
    e = 2.0 / pv
    v_nodes, v_weights = gauss_jacobi_01(n_nodes, beta, e - 1.0)
    g_nodes, g_weights = _mean_value_nodes(n_nodes)
    radius = s ** (1.0 / pv)
    rho = radius * v_nodes ** (1.0 / pv)
    total = 0.0 + 0.0j
    for quad in range(4):
        lo = quad * math.pi / 2.0
        phi = lo + (g_nodes + 1.0) * math.pi / 4.0
        wphi = g_weights * math.pi / 4.0
        cs, sn = np.cos(phi), np.sin(phi)
        ang = np.abs(cs * sn) ** (e - 1.0)
        x1 = np.sign(cs) * np.abs(cs) ** e
        x2 = np.sign(sn) * np.abs(sn) ** e
        # tensor phase grid: rows angular, columns radial
        ph = 2.0 * math.pi * (x[0] * np.outer(x1, rho) + x[1] * np.outer(x2, rho))
        kern = np.exp(1j * ph) @ v_weights
        total += np.dot(wphi * ang, kern)
    return complex(total * (2.0 / pv) * s ** beta * radius ** 2 / pv)
