"""Monte Carlo and extrapolated estimates with provenance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .amplitude import ComplexAmplitude


@dataclass(frozen=True)
class PropagatorEstimate:
    value: ComplexAmplitude
    stderr: float
    scheme: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.stderr >= 0:
            raise ValueError("stderr must be non-negative")

    def within(self, reference, n_sigma=3.0, extra_sigma=0.0) -> bool:
        """|value - reference| <= n_sigma * combined standard error."""
        sigma = math.hypot(self.stderr, extra_sigma)
        return abs(self.value.value - complex(reference)) <= n_sigma * sigma


def mean_and_stderr(samples: np.ndarray):
    """Order-independent mean and standard error of real or complex samples.

    Sums use :func:`math.fsum` (exactly rounded), so the result does not depend
    on how samples were partitioned over workers.
    """
    s = np.asarray(samples)
    n = s.size
    if n < 2:
        raise ValueError("need at least two samples")
    if np.all(s == s.flat[0]):
        return complex(s.flat[0]) if np.iscomplexobj(s) else float(s.flat[0]), 0.0
    if np.iscomplexobj(s):
        mean = complex(math.fsum(s.real) / n, math.fsum(s.imag) / n)
        dev2 = np.abs(s - mean) ** 2
    else:
        mean = math.fsum(s) / n
        dev2 = (s - mean) ** 2
    var = math.fsum(dev2) / (n - 1)
    return mean, math.sqrt(var / n)
