"""Parsing of polynomial symbols written as text, e.g. ``0.5*p^2 + 0.5*q^2 - 0.3*q``."""

from __future__ import annotations

import re

from ..oracles.symbols import HamiltonianSymbol
from ..realtime import PotentialSpec

_TERM = re.compile(r"^([0-9.eE+\-]*)\*?((?:[a-z](?:\^\d+)?\*?)*)$")
_FACTOR = re.compile(r"([a-z])(?:\^(\d+))?")


def parse_polynomial(text: str, variables: tuple) -> dict:
    """Monomial exponents -> coefficient; exponent tuples follow ``variables``."""
    src = text.replace(" ", "").replace("**", "^")
    if not src:
        raise ValueError("empty expression")
    # split on + and - that are not part of an exponent like 1e-3
    terms = re.split(r"(?<=[^eE+\-^])(?=[+\-])", src)
    out: dict = {}
    for term in terms:
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse term {term!r}")
        num, mono = m.groups()
        if num in ("", "+"):
            coef = 1.0
        elif num == "-":
            coef = -1.0
        else:
            coef = float(num)
        powers = [0] * len(variables)
        for var, exp in _FACTOR.findall(mono):
            if var not in variables:
                raise ValueError(f"unknown variable {var!r} in {term!r}; expected {variables}")
            powers[variables.index(var)] += int(exp or 1)
        key = tuple(powers)
        out[key] = out.get(key, 0.0) + coef
    return out


def parse_symbol(text: str, ordering="antinormal") -> HamiltonianSymbol:
    """A polynomial in p and q, or ``relativistic`` / ``relativistic(m)``."""
    t = text.strip()
    rel = re.fullmatch(r"relativistic(?:\(([^)]*)\))?", t)
    if rel:
        return HamiltonianSymbol.relativistic(float(rel.group(1)) if rel.group(1) else 1.0)
    return HamiltonianSymbol.polynomial(parse_polynomial(t, ("p", "q")), ordering=ordering, name=t)


def parse_potential(text: str) -> PotentialSpec:
    """A polynomial in x of degree at most two."""
    coeffs = parse_polynomial(text, ("x",))
    deg = max((k[0] for k, v in coeffs.items() if v != 0), default=0)
    if deg > 2:
        raise ValueError("potential must have degree <= 2")
    c = [coeffs.get((k,), 0.0) for k in range(3)]
    if deg == 0 and c[0] == 0:
        return PotentialSpec.zero()
    if deg <= 1:
        return PotentialSpec.linear(c[1], c[0])
    return PotentialSpec.quadratic(c[2], c[1], c[0])
