"""Complex amplitudes with a unit tag and provenance."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

DIMENSIONLESS = "1"
INV_SQRT_LENGTH = "length^-1/2"
INV_LENGTH = "length^-1"


@dataclass(frozen=True)
class ComplexAmplitude:
    """A complex number carrying a unit annotation.

    Multiplication by plain scalars keeps the unit; adding two amplitudes
    requires matching units. ``meta`` holds provenance such as integration
    counts and is ignored by equality.
    """

    value: complex
    unit: str = DIMENSIONLESS
    meta: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"non-finite amplitude {v!r}")
        object.__setattr__(self, "value", v)

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return cmath.phase(self.value)

    def __complex__(self):
        return self.value

    def __abs__(self):
        return abs(self.value)

    def _check(self, other):
        if isinstance(other, ComplexAmplitude):
            if other.unit != self.unit:
                raise ValueError(f"unit mismatch: {self.unit} vs {other.unit}")
            return other.value
        return complex(other)

    def __add__(self, other):
        return ComplexAmplitude(self.value + self._check(other), self.unit)

    __radd__ = __add__

    def __sub__(self, other):
        return ComplexAmplitude(self.value - self._check(other), self.unit)

    def __rsub__(self, other):
        return ComplexAmplitude(self._check(other) - self.value, self.unit)

    def __mul__(self, other):
        if isinstance(other, ComplexAmplitude):
            return NotImplemented
        return ComplexAmplitude(self.value * complex(other), self.unit, self.meta)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ComplexAmplitude):
            return NotImplemented
        return ComplexAmplitude(self.value / complex(other), self.unit, self.meta)

    def __neg__(self):
        return ComplexAmplitude(-self.value, self.unit, self.meta)

    def relative_error(self, reference) -> float:
        ref = complex(reference)
        return abs(self.value - ref) / abs(ref)
