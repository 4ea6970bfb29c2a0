"""Closed-form algebra of complex Gaussian integral kernels.

A kernel in ``n`` dimensions is stored as

    K(x_out, x_in) = exp(log_prefactor + z^T M z + l . z),   z = (x_out, x_in)

with ``M`` a complex symmetric ``2n x 2n`` matrix. Composition integrates the
shared variable in closed form, so chains of lattice steps never touch a grid.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from ..errors import CompositionDiverges

# Relative size of Re(y-coefficient) treated as zero, i.e. an oscillatory
# (Fresnel) direction evaluated with the i0+ prescription.
_FRESNEL_RTOL = 1e-13


@dataclass(frozen=True)
class GaussianKernel:
    quad: np.ndarray
    lin: np.ndarray
    log_prefactor: complex
    dim: int

    def __post_init__(self):
        n2 = 2 * self.dim
        quad = np.array(self.quad, dtype=complex).reshape(n2, n2)
        lin = np.array(self.lin, dtype=complex).reshape(n2)
        quad = 0.5 * (quad + quad.T)
        quad.setflags(write=False)
        lin.setflags(write=False)
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "log_prefactor", complex(self.log_prefactor))

    @classmethod
    def from_coefficients(cls, prefactor, a, b, c, d=0.0, e=0.0) -> "GaussianKernel":
        """1-D kernel ``prefactor * exp(a x''^2 + b x'' x' + c x'^2 + d x'' + e x')``."""
        quad = np.array([[a, b / 2], [b / 2, c]], dtype=complex)
        return cls(quad, [d, e], cmath.log(complex(prefactor)), 1)

    @classmethod
    def from_quadratic(cls, quad, lin=None, constant=0.0, prefactor=1.0) -> "GaussianKernel":
        """Kernel ``prefactor * exp(z^T quad z + lin . z + constant)``."""
        quad = np.asarray(quad, dtype=complex)
        dim = quad.shape[0] // 2
        if lin is None:
            lin = np.zeros(2 * dim, dtype=complex)
        return cls(quad, lin, cmath.log(complex(prefactor)) + complex(constant), dim)

    @property
    def prefactor(self) -> complex:
        return cmath.exp(self.log_prefactor)

    @property
    def coefficients(self):
        """``(a, b, c)`` of a 1-D kernel."""
        if self.dim != 1:
            raise ValueError("coefficients only defined for dim == 1")
        m = self.quad
        return m[0, 0], 2 * m[0, 1], m[1, 1]

    def exponent(self, x_out, x_in):
        """Exponent (including the log prefactor) at the given points.

        ``x_out``/``x_in`` broadcast; the trailing axis has length ``dim``
        (it may be omitted for ``dim == 1``).
        """
        x_out = np.asarray(x_out)
        x_in = np.asarray(x_in)
        if self.dim == 1:
            x_out = x_out[..., None]
            x_in = x_in[..., None]
        x_out, x_in = np.broadcast_arrays(x_out, x_in)
        z = np.concatenate([x_out, x_in], axis=-1)
        q = np.einsum("...i,ij,...j->...", z, self.quad, z)
        return self.log_prefactor + q + z @ self.lin

    def __call__(self, x_out, x_in):
        out = np.exp(self.exponent(x_out, x_in))
        return out if out.ndim else complex(out)

    def scaled(self, factor) -> "GaussianKernel":
        return GaussianKernel(self.quad, self.lin, self.log_prefactor + cmath.log(complex(factor)), self.dim)


def _log_gaussian_det(neg_a: np.ndarray) -> complex:
    """``-1/2 log det(-A)`` on the branch continuous from real positive matrices.

    Every eigenvalue of ``-A`` has non-negative real part when its real part is
    positive semidefinite, so the product of principal square roots is the
    analytic continuation of the real Gaussian normalisation.
    """
    eig = np.linalg.eigvals(neg_a)
    return -0.5 * complex(np.sum(np.log(eig.astype(complex))))


def _check_convergent(neg_a: np.ndarray):
    re = 0.5 * (neg_a + neg_a.conj().T).real
    scale = max(np.abs(neg_a).max(), 1e-300)
    w = np.linalg.eigvalsh(re)
    if w.min() < -_FRESNEL_RTOL * scale:
        raise CompositionDiverges(
            f"Gaussian integral over the composition variable diverges "
            f"(real part of -A has eigenvalue {w.min():.3e})"
        )
    if np.abs(np.linalg.eigvals(neg_a)).min() <= _FRESNEL_RTOL * scale:
        raise CompositionDiverges("degenerate composition variable coefficient (caustic)")


def compose_gaussian(k1: GaussianKernel, k2: GaussianKernel, measure=1.0) -> GaussianKernel:
    """``K(x'', x') = measure * integral k1(x'', y) k2(y, x') dy`` in closed form.

    ``k2`` acts first. ``measure`` multiplies the integral once (e.g.
    ``1/(2 pi hbar)`` for a phase-space cell). Purely oscillatory directions
    are evaluated with the i0+ prescription; a growing direction raises
    :class:`CompositionDiverges`.
    """
    if k1.dim != k2.dim:
        raise ValueError("kernels must share dim")
    n = k1.dim
    o, i = slice(0, n), slice(n, 2 * n)
    m1, m2 = k1.quad, k2.quad
    A = m1[i, i] + m2[o, o]
    neg_a = -A
    _check_convergent(neg_a)

    # B(z) = C z + l with z = (x'', x')
    C = np.zeros((n, 2 * n), dtype=complex)
    C[:, o] = 2 * m1[i, o]
    C[:, i] = 2 * m2[o, i]
    l = k1.lin[i] + k2.lin[o]

    a_inv_c = np.linalg.solve(A, C)
    a_inv_l = np.linalg.solve(A, l)

    quad = np.zeros((2 * n, 2 * n), dtype=complex)
    quad[o, o] = m1[o, o]
    quad[i, i] = m2[i, i]
    quad -= 0.25 * C.T @ a_inv_c
    lin = np.concatenate([k1.lin[o], k2.lin[i]]) - 0.5 * C.T @ a_inv_l
    log_pref = (
        k1.log_prefactor
        + k2.log_prefactor
        + cmath.log(complex(measure))
        + 0.5 * n * np.log(np.pi)
        + _log_gaussian_det(neg_a)
        - 0.25 * complex(l @ a_inv_l)
    )
    return GaussianKernel(quad, lin, log_pref, n)


def compose_power(step: GaussianKernel, count: int, measure=1.0) -> GaussianKernel:
    """``count``-fold self-composition of ``step`` by repeated squaring.

    ``measure`` is applied once per integrated node, i.e. ``count - 1`` times.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    result = None
    base = step
    while True:
        if count & 1:
            result = base if result is None else compose_gaussian(result, base, measure)
        count >>= 1
        if not count:
            return result
        base = compose_gaussian(base, base, measure)


def compose_chain(steps, measure=1.0) -> GaussianKernel:
    """Compose kernels listed in time order (``steps[0]`` acts first)."""
    steps = list(steps)
    out = steps[0]
    for k in steps[1:]:
        out = compose_gaussian(k, out, measure)
    return out
