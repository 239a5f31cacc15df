"""Closed-form large-argument predictors and empirical decay-rate fits.

Two analytic leading terms are provided: the classical Bessel form
sqrt(2/(pi r)) cos(r - (2 omega + 1) pi / 4), and the axis-direction
power law r^(-p/2) with an explicit gamma-factor constant for q >= 3.
`fit_decay_slope` measures decay exponents empirically from sampled
values, using bin-wise envelope maxima (or RMS) so oscillation zeros do
not contaminate the log-log regression.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special import (
    DomainError,
    PExponent,
    UnsupportedRepresentationError,
    log_gamma,
)

__all__ = [
    "DecayFit",
    "classical_asymptotic",
    "axis_asymptotic",
    "axis_asymptotic_constant",
    "fit_decay_slope",
]


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit of |samples| against radius."""

    slope: float
    intercept: float
    r_window: tuple[float, float]
    n_samples: int
    residual_rms: float

    def __post_init__(self) -> None:
        if self.r_window[0] < 10.0:
            raise DomainError(
                f"decay fits require r >= 10 throughout, window starts at {self.r_window[0]}"
            )
        if self.n_samples < 20:
            raise DomainError(f"decay fits need >= 20 samples, got {self.n_samples}")


def classical_asymptotic(omega: float, r: float) -> float:
    """Leading term of J_omega for large r (remainder O(r^(-3/2)) omitted)."""
    if r <= 0:
        raise DomainError(f"asymptotic form needs r > 0, got {r}")
    return math.sqrt(2.0 / (math.pi * r)) * math.cos(r - (2.0 * omega + 1.0) * math.pi / 4.0)


def axis_asymptotic_constant(p: PExponent, omega: float) -> float:
    """Amplitude 4*Gamma(omega+p/2) / (p^(omega+1) Gamma(omega+1/p) Gamma(1/p))."""
    pf = p.p
    log_c = (
        math.log(4.0)
        + log_gamma(omega + pf / 2.0)
        - (omega + 1.0) * math.log(pf)
        - log_gamma(omega + 1.0 / pf)
        - log_gamma(1.0 / pf)
    )
    return math.exp(log_c)


def axis_asymptotic(p: PExponent, omega: float, r: float) -> float:
    """Axis-direction power-law estimate: constant * r^(-p/2) * cos((2 omega + p) pi / 4).

    The phase factor is a fixed cosine, not r-dependent: this is a pure
    power-law envelope prediction, only meaningful as a decay-order and
    amplitude gauge.  Requires q >= 3; at p = 2 use classical_asymptotic.
    """
    if p.q < 3:
        raise UnsupportedRepresentationError(
            "axis power-law form needs q >= 3; p = 2 is covered by classical_asymptotic"
        )
    if r <= 0:
        raise DomainError(f"asymptotic form needs r > 0, got {r}")
    phase = math.cos((2.0 * omega + p.p) * math.pi / 4.0)
    return axis_asymptotic_constant(p, omega) * r ** (-p.p / 2.0) * phase


def fit_decay_slope(
    samples: Sequence[tuple[float, float]],
    mode: str = "envelope",
    n_bins: int = 12,
) -> DecayFit:
    """Fit log|value| envelope vs log r by least squares.

    Samples must be ascending in r, at least 20 of them, spanning at
    least one decade.  `envelope` mode takes the max of |value| in each
    of >= 8 logarithmic bins (suppressing oscillation zeros); `rms-bin`
    takes the bin RMS instead, which estimates the same exponent when
    the oscillation has roughly constant duty cycle.
    """
    if mode not in ("envelope", "rms-bin"):
        raise DomainError(f"unknown fit mode {mode!r}")
    if n_bins < 8:
        raise DomainError(f"need >= 8 bins, got {n_bins}")
    rs = np.asarray([s[0] for s in samples], dtype=float)
    vals = np.asarray([s[1] for s in samples], dtype=float)
    if rs.size < 20:
        raise DomainError(f"need >= 20 samples, got {rs.size}")
    if not np.all(np.diff(rs) > 0):
        raise DomainError("samples must be strictly ascending in r")
    if rs[-1] < 10.0 * rs[0]:
        raise DomainError(
            f"samples must span at least one decade, got [{rs[0]}, {rs[-1]}]"
        )
    log_r = np.log(rs)
    edges = np.linspace(log_r[0], log_r[-1] * (1.0 + 1e-12), n_bins + 1)
    which = np.clip(np.digitize(log_r, edges) - 1, 0, n_bins - 1)
    xs: list[float] = []
    ys: list[float] = []
    for b in range(n_bins):
        mask = which == b
        if not np.any(mask):
            continue
        a = np.abs(vals[mask])
        level = float(np.max(a)) if mode == "envelope" else float(np.sqrt(np.mean(a ** 2)))
        if level <= 0.0:
            continue
        xs.append(float(np.mean(log_r[mask])))
        ys.append(math.log(level))
    if len(xs) < 4:
        raise DomainError("too few nonempty bins for a slope fit")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = np.asarray(ys) - (slope * np.asarray(xs) + intercept)
    return DecayFit(
        slope=float(slope),
        intercept=float(intercept),
        r_window=(float(rs[0]), float(rs[-1])),
        n_samples=int(rs.size),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
    )
