"""Phase-space Hamiltonian symbols and the polynomial symbol calculus."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

ORDERINGS = ("antinormal", "weyl")
_ZERO_TOL = 0.0  # coefficients are dropped only when exactly zero


def _clean(coeffs: Mapping) -> dict:
    out = {}
    for (i, j), c in coeffs.items():
        i, j = int(i), int(j)
        if i < 0 or j < 0:
            raise ValueError("negative power in polynomial symbol")
        c = float(c)
        if abs(c) > _ZERO_TOL:
            out[(i, j)] = out.get((i, j), 0.0) + c
    return {k: v for k, v in sorted(out.items()) if v != 0.0}


@dataclass(frozen=True)
class HamiltonianSymbol:
    """A classical symbol H(p, q) with an operator-ordering tag.

    Polynomial symbols store ``coeffs[(i, j)]`` multiplying ``p**i q**j``.
    Non-polynomial symbols (e.g. sqrt(p^2 + m^2)) carry a vectorised ``func``
    and explicit structure tags; they are accepted only where a scheme can
    treat them (momentum-only or position-only evaluations, quadratures).
    """

    coeffs: Mapping | None = None
    func: Callable | None = None
    ordering: str = "antinormal"
    tags: frozenset = frozenset()
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.coeffs is None) == (self.func is None):
            raise ValueError("give exactly one of coeffs or func")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"ordering must be one of {ORDERINGS}")
        if self.coeffs is not None:
            c = _clean(self.coeffs)
            object.__setattr__(self, "coeffs", c)
            object.__setattr__(self, "tags", frozenset(self.tags) | _structure_tags(c))
        else:
            object.__setattr__(self, "tags", frozenset(self.tags))

    # -- constructors ------------------------------------------------------

    @classmethod
    def polynomial(cls, coeffs, ordering="antinormal", name=""):
        return cls(coeffs=dict(coeffs), ordering=ordering, name=name)

    @classmethod
    def zero(cls, ordering="antinormal"):
        return cls(coeffs={}, ordering=ordering, name="0")

    @classmethod
    def harmonic(cls, omega=1.0, shift=0.0, linear_q=0.0, ordering="antinormal"):
        """omega (p^2 + q^2)/2 + linear_q q + shift."""
        c = {(2, 0): omega / 2, (0, 2): omega / 2, (0, 1): linear_q, (0, 0): shift}
        return cls(coeffs=c, ordering=ordering, name="harmonic")

    @classmethod
    def free(cls, m=1.0, ordering="antinormal"):
        return cls(coeffs={(2, 0): 1 / (2 * m)}, ordering=ordering, name="free")

    @classmethod
    def separable(cls, m=1.0, potential_coeffs=(), ordering="antinormal"):
        """p^2/2m + sum_k v_k q^k."""
        c = {(2, 0): 1 / (2 * m)}
        for k, v in enumerate(potential_coeffs):
            c[(0, k)] = c.get((0, k), 0.0) + v
        return cls(coeffs=c, ordering=ordering, name="separable")

    @classmethod
    def relativistic(cls, m=1.0):
        """sqrt(p^2 + m^2), a momentum-only symbol."""

        def f(p, q=None, m=m):
            p = np.asarray(p)
            return np.sqrt(p * p + m * m)

        return cls(func=f, tags=frozenset({"momentum-only"}), name="relativistic",
                   meta={"m": m, "p_func": lambda p, m=m: np.sqrt(np.asarray(p) ** 2 + m * m)})

    @classmethod
    def from_function(cls, func, tags=(), name="", ordering="antinormal", **meta):
        return cls(func=func, tags=frozenset(tags), name=name, ordering=ordering, meta=meta)

    # -- evaluation --------------------------------------------------------

    @property
    def is_polynomial(self) -> bool:
        return self.coeffs is not None

    @property
    def degree(self) -> int:
        if not self.is_polynomial:
            raise ValueError("degree undefined for non-polynomial symbols")
        return max((i + j for i, j in self.coeffs), default=0)

    def __call__(self, p, q):
        if self.func is not None:
            return self.func(p, q)
        p = np.asarray(p)
        q = np.asarray(q)
        out = np.zeros(np.broadcast(p, q).shape, dtype=np.result_type(p, q, float))
        for (i, j), c in self.coeffs.items():
            out = out + c * p**i * q**j
        return out if out.ndim else out[()]

    def coefficient_matrix(self) -> np.ndarray:
        """``C[i, j]`` multiplying ``p**i q**j`` (dense, for the kernels)."""
        deg = self.degree
        out = np.zeros((deg + 1, deg + 1))
        for (i, j), c in self.coeffs.items():
            out[i, j] = c
        return out

    def quadratic_parts(self):
        """``(hpp, hpq, hqq, hp, hq, h0)`` with H = hpp p^2 + hpq pq + hqq q^2 + hp p + hq q + h0."""
        if "quadratic" not in self.tags:
            from ..errors import UnsupportedSymbol

            raise UnsupportedSymbol(f"symbol {self.name or self.coeffs} is not quadratic")
        g = lambda i, j: self.coeffs.get((i, j), 0.0)  # noqa: E731
        return g(2, 0), g(1, 1), g(0, 2), g(1, 0), g(0, 1), g(0, 0)

    def momentum_part(self, p):
        """Sum of terms that depend on ``p`` only (including the constant)."""
        if self.func is not None:
            return self.meta["p_func"](p)
        p = np.asarray(p)
        return sum((c * p**i for (i, j), c in self.coeffs.items() if j == 0), 0.0 * p)

    def position_part(self, q):
        """Sum of terms depending on ``q`` only (no constant)."""
        if self.func is not None:
            return self.meta["q_func"](q)
        q = np.asarray(q)
        return sum((c * q**j for (i, j), c in self.coeffs.items() if i == 0 and j > 0), 0.0 * q)

    def with_ordering(self, ordering):
        return HamiltonianSymbol(coeffs=self.coeffs, func=self.func, ordering=ordering,
                                 tags=self.tags, name=self.name, meta=self.meta)


def _structure_tags(c: dict) -> frozenset:
    tags = set()
    if all(i + j <= 2 for i, j in c):
        tags.add("quadratic")
    if all(j == 0 for i, j in c):
        tags.add("momentum-only")
    if all(i == 0 for i, j in c):
        tags.add("position-only")
    if all(i == 0 or j == 0 for i, j in c):
        tags.add("separable")
    return frozenset(tags)


# -- polynomial calculus ------------------------------------------------------


def laplacian(coeffs: Mapping) -> dict:
    """(d_p^2 + d_q^2) of a polynomial dict."""
    out: dict = {}
    for (i, j), c in coeffs.items():
        if i >= 2:
            out[(i - 2, j)] = out.get((i - 2, j), 0.0) + c * i * (i - 1)
        if j >= 2:
            out[(i, j - 2)] = out.get((i, j - 2), 0.0) + c * j * (j - 1)
    return out


def heat_flow(coeffs: Mapping, t: float) -> dict:
    """e^{t (d_p^2 + d_q^2)} applied to a polynomial; the series terminates."""
    out = dict(coeffs)
    term = dict(coeffs)
    k = 0
    while term:
        k += 1
        term = {key: v * t / k for key, v in laplacian(term).items()}
        for key, v in term.items():
            out[key] = out.get(key, 0.0) + v
    return out


def antinormal_from_weyl(weyl: HamiltonianSymbol, hbar: float = 1.0) -> HamiltonianSymbol:
    """H = e^{-(hbar/4)(d_p^2 + d_q^2)} H_W on polynomial Weyl symbols."""
    if not weyl.is_polynomial:
        raise ValueError("only polynomial symbols are supported")
    return HamiltonianSymbol(coeffs=heat_flow(weyl.coeffs, -hbar / 4), ordering="antinormal",
                             name=weyl.name)


def weyl_from_antinormal(sym: HamiltonianSymbol, hbar: float = 1.0) -> HamiltonianSymbol:
    """Inverse map, H_W = e^{+(hbar/4)(d_p^2 + d_q^2)} H."""
    if not sym.is_polynomial:
        raise ValueError("only polynomial symbols are supported")
    return HamiltonianSymbol(coeffs=heat_flow(sym.coeffs, hbar / 4), ordering="weyl", name=sym.name)


def binomial_alpha_expansion(coeffs: Mapping, hbar: float = 1.0) -> dict:
    """Rewrite a (p, q) polynomial in ``alpha^j conj(alpha)^k``.

    With ``alpha = (q + i p)/sqrt(2 hbar)``: ``q = sqrt(hbar/2)(alpha + alpha*)``
    and ``p = -i sqrt(hbar/2)(alpha - alpha*)``. Returns ``{(j, k): complex}``.
    """
    s = math.sqrt(hbar / 2)
    out: dict = {}
    for (i, j), c in coeffs.items():
        # p^i = (-i s)^i sum_a C(i,a) alpha^a (-alpha*)^(i-a)
        for a in range(i + 1):
            cp = (-1j * s) ** i * math.comb(i, a) * (-1) ** (i - a)
            for b in range(j + 1):
                cq = s**j * math.comb(j, b)
                key = (a + b, (i - a) + (j - b))
                out[key] = out.get(key, 0.0) + c * cp * cq
    return {k: v for k, v in out.items() if v != 0}
