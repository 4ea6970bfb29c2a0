"""Truncated number-basis engine: operators, coherent states, symbol maps.

Conventions: ``a = (Q + iP)/sqrt(2 hbar)``, so the fiducial vector annihilated
by ``Q + iP`` is ``|0>``, and

    |p, q> = U[p, q]|0> = e^{-ipq/2hbar} |alpha>,   alpha = (q + ip)/sqrt(2 hbar),

with ``|alpha>`` the standard coherent state e^{-|alpha|^2/2} sum alpha^n/sqrt(n!) |n>.
Operator assertions are trusted only on the block ``n <= D // 4``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg, special

from ..errors import QuadratureNotConverged, TruncationInsufficient
from .symbols import HamiltonianSymbol, binomial_alpha_expansion


@dataclass(frozen=True)
class FockSpace:
    dim: int
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError("dim must be an integer >= 2")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def trusted(self) -> int:
        """Size of the trusted block (indices ``0 .. D//4``)."""
        return self.dim // 4 + 1

    @cached_property
    def a(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.dim, dtype=float)), 1).astype(complex)

    @cached_property
    def adag(self) -> np.ndarray:
        return self.a.conj().T

    @cached_property
    def Q(self) -> np.ndarray:
        return math.sqrt(self.hbar / 2) * (self.a + self.adag)

    @cached_property
    def P(self) -> np.ndarray:
        return -1j * math.sqrt(self.hbar / 2) * (self.a - self.adag)

    @cached_property
    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.dim, dtype=float)).astype(complex)

    def alpha(self, p, q):
        return (np.asarray(q) + 1j * np.asarray(p)) / math.sqrt(2 * self.hbar)


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator must be a square matrix")
        if self.hermitian and np.abs(m - m.conj().T).max() > 1e-12 * max(1.0, np.abs(m).max()):
            raise ValueError("matrix flagged hermitian is not hermitian to 1e-12")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, self.hermitian)

    def block(self, n: int) -> np.ndarray:
        return self.matrix[:n, :n]

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            return StateVector(self.matrix @ other.components)
        return self.matrix @ other


@dataclass(frozen=True)
class StateVector:
    components: np.ndarray

    def __post_init__(self):
        v = np.array(self.components, dtype=complex).ravel()
        if not np.all(np.isfinite(v)):
            raise ValueError("state components must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "components", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.components, other.components))

    def expectation(self, op) -> complex:
        m = op.matrix if isinstance(op, OperatorMatrix) else op
        return complex(np.vdot(self.components, m @ self.components))


def number_state(n: int, space: FockSpace) -> StateVector:
    v = np.zeros(space.dim, complex)
    v[n] = 1.0
    return StateVector(v)


def fiducial_vector(space: FockSpace) -> StateVector:
    """Unit vector spanning the kernel of Q + iP, phase fixed real-positive."""
    _, s, vh = np.linalg.svd(space.Q + 1j * space.P)
    v = vh[-1].conj()
    k = np.argmax(np.abs(v))
    v = v * abs(v[k]) / v[k]
    return StateVector(v / np.linalg.norm(v))


def coherent_components(p, q, dim: int, hbar: float = 1.0) -> np.ndarray:
    """Number-basis components of |p,q>, shape ``broadcast(p, q).shape + (dim,)``."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    alpha = (q + 1j * p) / math.sqrt(2 * hbar)
    out = np.empty(alpha.shape + (dim,), complex)
    out[..., 0] = np.exp(-0.5 * np.abs(alpha) ** 2 - 0.5j * p * q / hbar)
    for n in range(1, dim):
        out[..., n] = out[..., n - 1] * alpha / math.sqrt(n)
    return out


def _buffer_tail(n_alpha2: float, space: FockSpace) -> float:
    """Mass of a coherent state with |alpha|^2 = n_alpha2 above the D/2 mark.

    The upper half of the basis is buffer: truncated exponentials of P and Q
    are only accurate for states that stay well below the cut.
    """
    cut = space.dim // 2
    return float(special.pdtrc(cut - 1, n_alpha2)) if n_alpha2 > 0 else 0.0


def _check_truncation(p, q, space: FockSpace, tol: float):
    n2 = (p * p + q * q) / (2 * space.hbar)
    tail = _buffer_tail(n2, space)
    if tail > tol:
        raise TruncationInsufficient(
            f"D={space.dim} too small for (p,q)=({p},{q}): coherent tail {tail:.2e} > {tol:.0e}"
        )


def weyl_operator(p, q, space: FockSpace, ordering="exponential", tol=1e-8) -> OperatorMatrix:
    """U[p,q] in the truncated basis.

    ``ordering="exponential"`` builds e^{-ipq/2hbar} e^{i(pQ - qP)/hbar};
    ``"product"`` builds e^{-iqP/hbar} e^{ipQ/hbar}. Both are unitary exactly
    in the truncation; they agree on the trusted block.
    """
    _check_truncation(p, q, space, tol)
    hb = space.hbar
    if ordering == "exponential":
        u = cmath.exp(-0.5j * p * q / hb) * linalg.expm(1j * (p * space.Q - q * space.P) / hb)
    elif ordering == "product":
        u = linalg.expm(-1j * q * space.P / hb) @ linalg.expm(1j * p * space.Q / hb)
    else:
        raise ValueError("ordering must be 'exponential' or 'product'")
    return OperatorMatrix(u)


def coherent_vector(p, q, space: FockSpace, method="analytic", tol=1e-8) -> StateVector:
    """|p,q> = U[p,q]|0>.

    ``method="analytic"`` uses the closed-form components (the default);
    ``"operator"`` applies :func:`weyl_operator` to :func:`fiducial_vector`.
    """
    if method == "operator":
        return weyl_operator(p, q, space, tol=tol) @ fiducial_vector(space)
    v = coherent_components(p, q, space.dim, space.hbar)
    lost = 1.0 - float(np.sum(np.abs(v) ** 2))
    if lost > tol:
        raise TruncationInsufficient(f"D={space.dim} loses {lost:.2e} of |{p},{q}>")
    return StateVector(v)


# -- phase-space quadrature ---------------------------------------------------


def default_radius(space: FockSpace, degree: int = 0, tol: float = 1e-12) -> float:
    """Disk radius whose Gaussian tail is below ``tol`` for the trusted block."""
    k = space.trusted + degree / 2 + 1
    x = k
    while special.gammaincc(k, x) > tol:
        x *= 1.1
    return math.sqrt(2 * space.hbar * x)


def polar_rule(R, n_r, n_theta):
    xg, wg = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * R * (xg + 1)
    wr = 0.5 * R * wg * r
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    p = (r[:, None] * np.cos(th)[None, :]).ravel()
    q = (r[:, None] * np.sin(th)[None, :]).ravel()
    w = (wr[:, None] * np.full(n_theta, 2 * np.pi / n_theta)[None, :]).ravel()
    return p, q, w


def phase_space_operator(func, space: FockSpace, R=None, tol=1e-7, n_r=64, n_theta=None,
                         max_doublings=6, angular_exact=False, block=None):
    """int f(p,q) |p,q><p,q| dp dq / (2 pi hbar) over the disk of radius ``R``.

    Polar rule: Gauss-Legendre in r, trapezoid in theta. The radial order
    (and the angular one unless ``angular_exact``) is doubled until the
    trusted block moves by at most ``tol``. Returns ``(matrix, info)``.
    """
    R = default_radius(space) if R is None else R
    n_theta = n_theta or space.dim + 17
    block = block or space.trusted
    prev = None
    for _ in range(max_doublings + 1):
        p, q, w = polar_rule(R, n_r, n_theta)
        f = np.asarray(func(p, q), dtype=complex) * w / (2 * np.pi * space.hbar)
        c = coherent_components(p, q, space.dim, space.hbar)
        mat = (c * f[:, None]).T @ c.conj()
        if prev is not None:
            shift = np.abs(mat[:block, :block] - prev[:block, :block]).max()
            if shift <= tol:
                return mat, {"n_r": n_r, "n_theta": n_theta, "R": R, "shift": shift}
        prev = mat
        n_r *= 2
        if not angular_exact:
            n_theta *= 2
    raise QuadratureNotConverged(f"phase-space quadrature did not settle to {tol:g} (last shift {shift:.2e})")


def antinormal_quantize(symbol: HamiltonianSymbol, space: FockSpace, R=None, tol=1e-7, **kw) -> OperatorMatrix:
    """Anti-normal quantization int H |p,q><p,q| dp dq / (2 pi hbar) by quadrature."""
    if symbol.is_polynomial:
        deg = symbol.degree
        kw.setdefault("n_theta", space.dim + deg + 1)  # exact for the angular Fourier modes
        kw.setdefault("angular_exact", True)
        R = default_radius(space, deg) if R is None else R
    mat, info = phase_space_operator(symbol, space, R=R, tol=tol, **kw)
    real = symbol.is_polynomial
    if real:
        mat = 0.5 * (mat + mat.conj().T)
    return OperatorMatrix(mat, hermitian=real)


def _ordered_operator(symbol: HamiltonianSymbol, space: FockSpace, antinormal: bool) -> OperatorMatrix:
    deg = symbol.degree
    big = FockSpace(space.dim + deg + 1, space.hbar)
    a, ad = big.a, big.adag
    out = np.zeros((big.dim, big.dim), complex)
    for (j, k), c in binomial_alpha_expansion(symbol.coeffs, space.hbar).items():
        aj = np.linalg.matrix_power(a, j)
        adk = np.linalg.matrix_power(ad, k)
        out += c * (aj @ adk if antinormal else adk @ aj)
    out = out[: space.dim, : space.dim]
    return OperatorMatrix(0.5 * (out + out.conj().T), hermitian=True)


def antinormal_operator(symbol: HamiltonianSymbol, space: FockSpace) -> OperatorMatrix:
    """Algebraic anti-normal ordering: alpha^j conj(alpha)^k -> a^j a^dag^k."""
    return _ordered_operator(symbol, space, antinormal=True)


def normal_operator(symbol: HamiltonianSymbol, space: FockSpace) -> OperatorMatrix:
    """Algebraic normal ordering: alpha^j conj(alpha)^k -> a^dag^k a^j."""
    return _ordered_operator(symbol, space, antinormal=False)


def matrix_propagator(H: OperatorMatrix, T: float, hbar: float = 1.0) -> OperatorMatrix:
    """e^{-iTH/hbar} by eigendecomposition."""
    m = H.matrix
    if np.abs(m - m.conj().T).max() > 1e-10 * max(1.0, np.abs(m).max()):
        raise ValueError("matrix_propagator requires a hermitian operator")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return OperatorMatrix((v * np.exp(-1j * T * w / hbar)) @ v.conj().T)


def cs_matrix_element(U: OperatorMatrix, p2, q2, p1, q1, space: FockSpace) -> complex:
    """<p2,q2| U |p1,q1> in the truncated basis."""
    c2 = coherent_components(p2, q2, space.dim, space.hbar)
    c1 = coherent_components(p1, q1, space.dim, space.hbar)
    return complex(np.vdot(c2, U.matrix @ c1))


def number_rotation_element(p2, q2, p1, q1, theta, shift=0.0, hbar=1.0) -> complex:
    """<p2,q2| e^{-i theta (N + shift)} |p1,q1> in closed form.

    e^{-i theta N} rotates alpha -> alpha e^{-i theta}; the label phases come
    from e^{-ipq/2hbar} on each side.
    """
    a1 = (q1 + 1j * p1) / math.sqrt(2 * hbar)
    a2 = (q2 + 1j * p2) / math.sqrt(2 * hbar)
    expo = (
        a2.conjugate() * a1 * cmath.exp(-1j * theta)
        - 0.5 * abs(a1) ** 2
        - 0.5 * abs(a2) ** 2
        + 0.5j * (p2 * q2 - p1 * q1) / hbar
        - 1j * theta * shift
    )
    return cmath.exp(expo)
