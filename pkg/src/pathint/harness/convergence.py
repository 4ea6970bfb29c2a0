"""Log-log convergence fits with confidence bands."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

EXACT_TOL = 1e-13


class InsufficientPoints(ValueError):
    """Fewer than three usable resolutions."""


@dataclass(frozen=True)
class ConvergenceFit:
    """error ~ C * resolution^slope; ``order = -slope``.

    ``exact`` is set when every error is at rounding level, in which case the
    order is undefined and reported as NaN.
    """

    n_points: int
    slope: float
    order: float
    order_low: float
    order_high: float
    exact: bool
    monotone: bool
    confidence: float = 0.95

    def as_dict(self) -> dict:
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in asdict(self).items()}

    def order_within(self, lo, hi) -> bool:
        return self.exact or (lo <= self.order <= hi)


def convergence_table(resolution, error, confidence=0.95, exact_tol=EXACT_TOL) -> ConvergenceFit:
    """Fit log(error) against log(resolution) by least squares.

    ``resolution`` is N, nu or any quantity whose growth should drive the
    error to zero. The band is the Student-t interval on the slope; with
    exactly three points it has one degree of freedom and is wide.
    """
    x = np.asarray(resolution, float)
    e = np.abs(np.asarray(error, float))
    keep = np.isfinite(x) & np.isfinite(e) & (x > 0)
    x, e = x[keep], e[keep]
    if x.size < 3:
        raise InsufficientPoints(f"need at least 3 resolutions, got {x.size}")
    order = np.argsort(x)
    x, e = x[order], e[order]
    nan = float("nan")
    if np.all(e <= exact_tol):
        return ConvergenceFit(int(x.size), nan, nan, nan, nan, True, True, confidence)
    e = np.maximum(e, np.finfo(float).tiny)
    fit = stats.linregress(np.log(x), np.log(e))
    dof = x.size - 2
    if dof > 0 and np.isfinite(fit.stderr):
        half = float(stats.t.ppf(0.5 + confidence / 2, dof) * fit.stderr)
    else:
        half = nan
    slope = float(fit.slope)
    return ConvergenceFit(int(x.size), slope, -slope, -slope - half, -slope + half, False,
                          bool(np.all(np.diff(e) < 0)), confidence)


def self_convergence_errors(values) -> np.ndarray:
    """|v_{k+1} - v_k| for a sequence of refinements (no oracle available)."""
    v = np.asarray(values, complex)
    return np.abs(np.diff(v))
