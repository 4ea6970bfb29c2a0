"""Scheme registry: required fields, fixed CSV columns and row producers.

Every scheme turns validated parameters into a list of :class:`Task` objects.
A task computes one row; rows are sorted by ``Task.key`` so file order never
depends on completion order. Stochastic tasks receive a
:class:`RandomStream` whose index is the task's position among the
stochastic tasks of the experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .. import kernels
from ..coherent import cs_lattice_propagator, fock_propagator_element
from ..dk import DKConfig, dk_extrapolate, dk_lattice_amplitude, dk_mc_crosscheck, fixed_spread_rule, richardson_rule
from ..euclidean import (CameronSpec, cameron_absolute_value, cameron_bruteforce, cameron_chain_value,
                         cameron_closed_form, cameron_variation_factor, fk_bridge_mc, fk_transfer_matrix)
from ..errors import ConfigError
from ..ito import ItoSpec, ito_limit_study, ito_propagator
from ..numerics.bridge import DEFAULT_BLOCK
from ..numerics.lattice import TimeLattice
from ..numerics.rng import RandomStream
from ..oracles.closed_form import (euclidean_oscillator_kernel, free_propagator, harmonic_propagator,
                                   relativistic_free_propagator)
from ..realtime import WavefunctionGrid, lattice_chain_quadratic, ps_lattice_q
from .config import ExperimentConfig, parse_complex, parse_float, parse_float_list, parse_int_list
from .convergence import InsufficientPoints, convergence_table
from .expr import parse_potential, parse_symbol


# -- fields ------------------------------------------------------------------


def _positive(v):
    if not v > 0:
        raise ValueError("must be positive")
    return v


def _int_list(text):
    vals = parse_int_list(text)
    if not vals or any(v < 0 for v in vals) or len(set(vals)) != len(vals):
        raise ValueError("need distinct non-negative integers")
    return sorted(vals)


def _pos_list(text):
    vals = parse_float_list(text)
    if not vals or any(not v > 0 for v in vals) or len(set(vals)) != len(vals):
        raise ValueError("need distinct positive numbers")
    return sorted(vals)


def _pins(text):
    vals = parse_float_list(text)
    if len(vals) != 4:
        raise ValueError("pins are p2,q2,p1,q1")
    return tuple(vals)


def _grid(text):
    lo, hi, n = parse_float_list(text)
    if n != int(n):
        raise ValueError("grid is lo,hi,n with integer n")
    return WavefunctionGrid(lo, hi, int(n))


def _seed(text):
    v = int(text.strip(), 0)
    if not 0 <= v < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return v


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true or false")


def _choice(*opts):
    def parse(text):
        t = text.strip()
        if t not in opts:
            raise ValueError(f"must be one of {opts}")
        return t

    return parse


@dataclass(frozen=True)
class Field:
    section: str
    key: str
    parse: Callable
    required: bool = True
    default: Any = None
    doc: str = ""

    @property
    def label(self) -> str:
        return f"{self.section}.{self.key}"


def _f(section, key, parse, default=None, doc=""):
    return Field(section, key, parse, default is None, default, doc)


PHYS_HBAR = _f("physics", "hbar", lambda s: _positive(parse_float(s)), 1.0, "Planck constant")
PHYS_M = _f("physics", "m", lambda s: _positive(parse_float(s)), 1.0, "mass")
PHYS_T = _f("physics", "T", lambda s: _positive(parse_float(s)), doc="total time")
SEED = Field("numerics", "seed", _seed, False, None, "u64 seed; required whenever Monte Carlo rows are produced")


# -- columns -----------------------------------------------------------------

STATUS = (("status", "str"), ("message", "str"))
VALUE = (("value_re", "float"), ("value_im", "float"))
ORACLE = (("oracle_re", "float"), ("oracle_im", "float"), ("rel_error", "float"))
STREAM = (("stderr", "float"), ("seed", "int"), ("stream_index", "int"), ("block_first", "int"),
          ("block_last", "int"))


@dataclass
class Task:
    key: tuple
    params: dict
    run: Callable[[RandomStream | None], dict]
    stochastic: bool = False


@dataclass(frozen=True)
class Scheme:
    name: str
    description: str
    fields: tuple
    columns: tuple
    tasks: Callable[[dict], list]
    summarize: Callable[[dict, list], dict] = lambda p, rows: {}
    needs_seed: Callable[[dict], bool] = lambda p: False
    oracle: str = ""

    @property
    def column_names(self) -> list:
        return [c for c, _ in self.columns]

    def validate(self, cfg: ExperimentConfig) -> dict:
        errors = []
        params = {}
        known = {(f.section, f.key) for f in self.fields}
        for sec in ("physics", "numerics"):
            for key in getattr(cfg, sec):
                if (sec, key) not in known:
                    errors.append(f"{sec}.{key}: not a field of scheme {self.name!r}")
        for f in self.fields:
            raw = cfg.get(f.section, f.key)
            if raw is None:
                if f.required:
                    errors.append(f"{f.label}: required")
                    continue
                if not isinstance(f.default, str):
                    params[f.key] = f.default
                    continue
                raw = f.default
            try:
                params[f.key] = f.parse(raw)
            except (ValueError, TypeError) as exc:
                errors.append(f"{f.label}: {exc}")
        if not errors:
            try:
                self._post_validate(params)
            except ValueError as exc:
                errors.append(str(exc))
        if not errors and self.needs_seed(params) and params.get("seed") is None:
            errors.append("numerics.seed: required for stochastic rows (or pass --seed)")
        if errors:
            raise ConfigError(errors)
        return params

    def _post_validate(self, params):
        check = POST_CHECKS.get(self.name)
        if check:
            check(params)


def _split(z) -> dict:
    if z is None:
        return {}
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def value_cols(v) -> dict:
    s = _split(v)
    return {"value_re": s.get("re"), "value_im": s.get("im")}


def oracle_cols(v, oracle) -> dict:
    if oracle is None:
        return {}
    oracle = complex(oracle)
    out = {"oracle_re": oracle.real, "oracle_im": oracle.imag}
    if v is not None and oracle != 0:
        out["rel_error"] = abs(complex(v) - oracle) / abs(oracle)
    return out


def stream_cols(stream: RandomStream, n_samples, block_size) -> dict:
    n_blocks = -(-n_samples // block_size)
    return {"seed": stream.seed, "stream_index": stream.stream_index,
            "block_first": stream.block, "block_last": stream.block + n_blocks - 1}


def _fit_summary(rows, res_key, err_key="rel_error") -> dict:
    ok = [r for r in rows if r.get("status") == "ok" and r.get(err_key) is not None]
    try:
        fit = convergence_table([r[res_key] for r in ok], [r[err_key] for r in ok])
    except InsufficientPoints as exc:
        return {"fit": None, "fit_note": str(exc)}
    return {"fit": fit.as_dict(), "fit_resolution": res_key}


# -- lattice ------------------------------------------------------------------


def _potential_oracle(V, m, omega_scale):
    """(kind, omega, c0) for V = c0 or V = c0 + c2 x^2 with c2 > 0, else None."""
    c = V.coeffs + (0.0,) * (3 - len(V.coeffs))
    c0, c1, c2 = c[:3]
    if c1 != 0:
        return None
    if c2 == 0:
        return ("free", 0.0, c0)
    if c2 > 0:
        return ("harmonic", math.sqrt(omega_scale * c2), c0)
    return None


def _lattice_tasks(p):
    V = parse_potential(p["V"])
    m, hb, T = p["m"], p["hbar"], p["T"]
    x2, x1 = p["x2"], p["x1"]
    kind = _potential_oracle(V, m, 2.0 / m)
    oracle = None
    if kind is not None:
        name, omega, c0 = kind
        phase = complex(math.cos(c0 * T / hb), -math.sin(c0 * T / hb))
        if name == "free":
            oracle = free_propagator(x2, x1, T, m, hb).value * phase
        elif 0 < omega * T < math.pi:
            oracle = harmonic_propagator(x2, x1, T, m, omega, hb).value * phase

    def make(N):
        def run(_stream):
            lat = TimeLattice.from_duration(T, N)
            v = lattice_chain_quadratic(V, lat, x2, x1, m, hb, p["damping"]).value
            return {"eps": lat.eps, **value_cols(v), **oracle_cols(v, oracle)}

        return Task((N,), {"N": N}, run)

    return [make(N) for N in p["N_list"]]


LATTICE = Scheme(
    "lattice", "Real-time configuration-space lattice, closed-form Gaussian chain (V of degree <= 2).",
    (PHYS_T, PHYS_M, PHYS_HBAR,
     _f("physics", "V", str, "0", "potential, polynomial in x of degree <= 2"),
     _f("physics", "x2", parse_float, doc="final position"),
     _f("physics", "x1", parse_float, doc="initial position"),
     _f("numerics", "N_list", _int_list, doc="interior node counts"),
     _f("numerics", "damping", parse_float, 0.0, "scale of the interior convergence factor"),
     SEED),
    (("N", "int"), ("eps", "float")) + VALUE + ORACLE + STATUS,
    _lattice_tasks,
    lambda p, rows: _fit_summary(rows, "N"),
    oracle="free or harmonic closed form when V = c0 or c0 + c2 x^2",
)


# -- fk -------------------------------------------------------------------------


def _fk_tasks(p):
    V = parse_potential(p["V"])
    nu, T, x2, x1 = p["nu"], p["T"], p["x2"], p["x1"]
    kind = _potential_oracle(V, 1.0, 2.0 * nu)
    oracle = None
    if kind is not None:
        _, omega, c0 = kind
        oracle = euclidean_oscillator_kernel(x2, x1, T, nu, omega) * math.exp(-c0 * T)
    tasks = []
    method = p["method"]
    for N in p["N_list"]:
        if method in ("transfer", "both"):
            def run_tm(_stream, N=N):
                W = fk_transfer_matrix(V, nu, TimeLattice.from_duration(T, N - 1), p["grid"])
                v = float(W.at(x2, x1))
                return {**value_cols(v), **oracle_cols(v, oracle), "min_kernel": float(W.matrix.min())}

            tasks.append(Task(("transfer", N), {"method": "transfer", "N": N}, run_tm))
        if method in ("mc", "both"):
            def run_mc(stream, N=N):
                n, bs = p["samples"], p["block_size"]
                est = fk_bridge_mc(V, nu, T, x2, x1, N, n, stream, bs)
                v = est.value.value
                return {**value_cols(v), **oracle_cols(v, oracle), "stderr": est.stderr,
                        **stream_cols(stream, n, bs)}

            tasks.append(Task(("mc", N), {"method": "mc", "N": N, "n_samples": p["samples"]}, run_mc, True))
    return tasks


FK = Scheme(
    "fk", "Imaginary-time Feynman-Kac kernel: transfer matrix and Brownian-bridge Monte Carlo.",
    (PHYS_T,
     _f("physics", "nu", lambda s: _positive(parse_float(s)), 1.0, "diffusion constant"),
     _f("physics", "V", str, "0.5*x^2", "potential, polynomial in x of degree <= 2, bounded below"),
     _f("physics", "x2", parse_float, 0.0, "final position"),
     _f("physics", "x1", parse_float, 0.0, "initial position"),
     _f("numerics", "N_list", _int_list, doc="number of time steps (links)"),
     _f("numerics", "method", _choice("transfer", "mc", "both"), "transfer"),
     _f("numerics", "grid", _grid, "-8,8,401", "lo,hi,n for the transfer matrix"),
     _f("numerics", "samples", lambda s: int(parse_float(s)), 100000, "Monte Carlo samples per row"),
     _f("numerics", "block_size", lambda s: int(parse_float(s)), DEFAULT_BLOCK, "samples per stream block"),
     SEED),
    (("method", "str"), ("N", "int"), ("n_samples", "int")) + VALUE + ORACLE + STREAM
    + (("min_kernel", "float"),) + STATUS,
    _fk_tasks,
    needs_seed=lambda p: p["method"] in ("mc", "both"),
    oracle="Mehler kernel when V = c0 + c2 x^2",
)


# -- cameron ----------------------------------------------------------------------


def _cameron_tasks(p):
    lam, eps, x2, x1 = p["lambda"], p["eps"], p["x2"], p["x1"]

    def make(N):
        def run(_stream):
            spec = CameronSpec(lam, eps, N)
            v = cameron_chain_value(spec, x2, x1).value
            row = {"factor": cameron_variation_factor(lam, N), "abs_value": cameron_absolute_value(spec, x2, x1),
                   **value_cols(v), **oracle_cols(v, cameron_closed_form(spec, x2, x1))}
            if p["bruteforce"] and N <= 3:
                b = cameron_bruteforce(spec, x2, x1)
                row.update(bruteforce_re=b.real, bruteforce_im=b.imag)
            return row

        return Task((N,), {"N": N}, run)

    if any(N < 1 for N in p["N_list"]):
        raise ValueError("numerics.N_list: Cameron chains need N >= 1")
    return [make(N) for N in p["N_list"]]


def _cameron_summary(p, rows):
    f = [r["factor"] for r in rows if r.get("status") == "ok"]
    return {"factor_monotone": bool(np.all(np.diff(f) > 0)) if len(f) > 1 else None,
            "factor_last": f[-1] if f else None,
            "divergent": complex(p["lambda"]).imag != 0}


CAMERON = Scheme(
    "cameron", "Complex Gaussian chain and Cameron's total-variation factor.",
    (_f("physics", "lambda", parse_complex, doc="chain weight, re,im with Re > 0"),
     _f("physics", "eps", lambda s: _positive(parse_float(s)), 0.1, "lattice spacing"),
     _f("physics", "x2", parse_float, 0.0), _f("physics", "x1", parse_float, 0.0),
     _f("numerics", "N_list", _int_list, doc="interior integration counts (>= 1)"),
     _f("numerics", "bruteforce", _bool, False, "add tensor Gauss-Hermite values for N <= 3"),
     SEED),
    (("N", "int"), ("factor", "float"), ("abs_value", "float")) + VALUE + ORACLE
    + (("bruteforce_re", "float"), ("bruteforce_im", "float")) + STATUS,
    _cameron_tasks,
    _cameron_summary,
    oracle="closed-form chain value",
)


# -- ito ---------------------------------------------------------------------------


def _ito_tasks(p):
    m, hb, T, x = p["m"], p["hbar"], p["T"], p["x"]
    oracle = free_propagator(x, 0.0, T, m, hb).value

    def make(nu):
        def run(_stream):
            v = ito_propagator(ItoSpec(nu, m, hb, T, x)).value
            return {**value_cols(v), **oracle_cols(v, oracle)}

        return Task((nu,), {"nu": nu}, run)

    return [make(nu) for nu in p["nu_list"]]


def _ito_summary(p, rows):
    out = _fit_summary(rows, "nu")
    if len(p["nu_list"]) >= 2:
        study = ito_limit_study(p["nu_list"], p["m"], p["hbar"], p["T"], p["x"])
        out.update(slope=study.slope, monotone=study.monotone)
    return out


ITO = Scheme(
    "ito", "Ornstein-Uhlenbeck regularized free particle; nu -> infinity limit.",
    (PHYS_T, PHYS_M, PHYS_HBAR,
     _f("physics", "x", parse_float, 1.0, "final position (initial pinned at 0)"),
     _f("numerics", "nu_list", _pos_list, doc="regulator strengths"),
     SEED),
    (("nu", "float"),) + VALUE + ORACLE + STATUS,
    _ito_tasks,
    _ito_summary,
    oracle="free propagator",
)


# -- ps-lattice --------------------------------------------------------------------


def _ps_oracle(H, T, dq, q2, q1, hb):
    if H.name == "relativistic":
        return relativistic_free_propagator(dq, T, H.meta["m"], hb).value
    if not H.is_polynomial:
        return None
    c = H.coeffs
    extra = set(c) - {(2, 0), (0, 2), (0, 0)}
    a = c.get((2, 0), 0.0)
    if extra or a <= 0:
        return None
    m = 1 / (2 * a)
    c2, c0 = c.get((0, 2), 0.0), c.get((0, 0), 0.0)
    phase = complex(math.cos(c0 * T / hb), -math.sin(c0 * T / hb))
    if c2 == 0:
        return free_propagator(q2, q1, T, m, hb).value * phase
    omega = math.sqrt(2 * c2 / m) if c2 > 0 else 0.0
    if 0 < omega * T < math.pi:
        return harmonic_propagator(q2, q1, T, m, omega, hb).value * phase
    return None


def _ps_tasks(p):
    H = parse_symbol(p["H"])
    T, hb, q2, q1 = p["T"], p["hbar"], p["q2"], p["q1"]
    oracle = _ps_oracle(H, T, q2 - q1, q2, q1, hb)

    def make(N):
        def run(_stream):
            v = ps_lattice_q(H, TimeLattice.from_duration(T, N), q2, q1, hb).value
            return {**value_cols(v), **oracle_cols(v, oracle)}

        return Task((N,), {"N": N}, run)

    return [make(N) for N in p["N_list"]]


PS_LATTICE = Scheme(
    "ps-lattice", "Phase-space lattice pinned in q (separable quadratic or momentum-only H).",
    (PHYS_T, PHYS_HBAR,
     _f("physics", "H", str, doc="symbol: polynomial in p, q or relativistic(m)"),
     _f("physics", "q2", parse_float, doc="final position"),
     _f("physics", "q1", parse_float, doc="initial position"),
     _f("numerics", "N_list", _int_list, doc="interior node counts"),
     SEED),
    (("N", "int"),) + VALUE + ORACLE + STATUS,
    _ps_tasks,
    lambda p, rows: _fit_summary(rows, "N"),
    oracle="free, harmonic or damped-quadrature relativistic kernel",
)


# -- cs ---------------------------------------------------------------------------


def _cs_tasks(p):
    H = parse_symbol(p["H"], ordering="antinormal")
    T, hb, pins = p["T"], p["hbar"], p["pins"]
    oracle = None
    if H.is_polynomial:
        oracle = fock_propagator_element(H, T, pins, hb, ordering="normal", dim=p["dim"])

    def make(N):
        def run(_stream):
            v = cs_lattice_propagator(H, TimeLattice.from_duration(T, N), pins, hb).value
            return {**value_cols(v), **oracle_cols(v, oracle)}

        return Task((N,), {"N": N}, run)

    return [make(N) for N in p["N_list"]]


CS = Scheme(
    "cs", "Coherent-state phase-space lattice.",
    (PHYS_T, PHYS_HBAR,
     _f("physics", "H", str, doc="polynomial symbol in p, q"),
     _f("physics", "pins", _pins, (0.0, 0.0, 0.0, 0.0), "p2,q2,p1,q1"),
     _f("numerics", "N_list", _int_list, doc="interior node counts"),
     _f("numerics", "dim", lambda s: int(parse_float(s)), 80, "Fock dimension of the oracle"),
     SEED),
    (("N", "int"),) + VALUE + ORACLE + STATUS,
    _cs_tasks,
    lambda p, rows: _fit_summary(rows, "N"),
    oracle="number-basis propagator of the normal-ordered operator",
)


# -- dk ----------------------------------------------------------------------------

_DK_KIND_ORDER = {"richardson": 0, "extrapolated": 1, "mc": 2}


def _dk_tasks(p):
    H = parse_symbol(p["H"], ordering="antinormal")
    T, hb, pins = p["T"], p["hbar"], p["pins"]
    oracle = fock_propagator_element(H, T, pins, hb, ordering="antinormal", dim=p["dim"])
    rule = richardson_rule() if p["N_rule"] == "richardson" else fixed_spread_rule()
    template = DKConfig(H, p["nu_list"][0], TimeLattice.from_duration(T, 1), pins, hb, p["rule"])
    tasks = []
    for nu in p["nu_list"]:
        def run_chain(_stream, nu=nu):
            v = rule(template.with_(nu=nu))
            return {**value_cols(v), **oracle_cols(v, oracle)}

        tasks.append(Task((0, nu), {"kind": "richardson", "nu": nu}, run_chain))
    if len(p["nu_list"]) >= 3:
        def run_extrap(_stream):
            ex = dk_extrapolate(template, p["nu_list"], rule, floor=1e-6)
            v = ex.estimate.value.value
            return {**value_cols(v), **oracle_cols(v, oracle), "stderr": ex.estimate.stderr}

        tasks.append(Task((1, 0.0), {"kind": "extrapolated"}, run_extrap))
    if p["samples"] > 0:
        nu_mc, N_mc, n, bs = p["mc_nu"], p["mc_N"], p["samples"], p["block_size"]

        def run_mc(stream):
            cfg = template.with_(nu=nu_mc, lat=TimeLattice.from_duration(T, N_mc))
            chain = dk_lattice_amplitude(cfg).value
            est = dk_mc_crosscheck(cfg, n, stream, bs, oracle_scale=abs(chain))
            v = est.value.value
            return {**value_cols(v), **oracle_cols(v, chain), "stderr": est.stderr, **stream_cols(stream, n, bs)}

        tasks.append(Task((2, nu_mc), {"kind": "mc", "nu": nu_mc, "N": N_mc, "n_samples": n}, run_mc, True))
    return tasks


def _dk_summary(p, rows):
    ex = [r for r in rows if r.get("kind") == "extrapolated" and r.get("status") == "ok"]
    out = {"N_rule": p["N_rule"]}
    if ex:
        out["extrapolated_rel_error"] = ex[0].get("rel_error")
    mc = [r for r in rows if r.get("kind") == "mc" and r.get("status") == "ok"]
    if mc and mc[0].get("stderr"):
        r = mc[0]
        dev = abs(complex(r["value_re"], r["value_im"]) - complex(r["oracle_re"], r["oracle_im"]))
        out["mc_sigma"] = dev / r["stderr"]
    return out


DK = Scheme(
    "dk", "Continuous-time phase-space regularization: nu ladder, extrapolation, Monte Carlo cross-check.",
    (PHYS_T, PHYS_HBAR,
     _f("physics", "H", str, doc="quadratic symbol in p, q (antinormal)"),
     _f("physics", "pins", _pins, (0.0, 0.0, 0.0, 0.0), "p2,q2,p1,q1"),
     _f("numerics", "nu_list", _pos_list, doc="diffusion constants"),
     _f("numerics", "N_rule", _choice("richardson", "fixed"), "richardson", "lattice rule per nu"),
     _f("numerics", "rule", _choice("midpoint", "left"), "midpoint", "p dq discretization"),
     _f("numerics", "mc_nu", lambda s: _positive(parse_float(s)), 4.0, "nu of the Monte Carlo row"),
     _f("numerics", "mc_N", lambda s: int(parse_float(s)), 63, "interior nodes of the Monte Carlo row"),
     _f("numerics", "samples", lambda s: int(parse_float(s)), 0, "Monte Carlo samples (0 disables)"),
     _f("numerics", "block_size", lambda s: int(parse_float(s)), DEFAULT_BLOCK, "samples per stream block"),
     _f("numerics", "dim", lambda s: int(parse_float(s)), 80, "Fock dimension of the oracle"),
     SEED),
    (("kind", "str"), ("nu", "float"), ("N", "int"), ("n_samples", "int")) + VALUE + ORACLE + STREAM + STATUS,
    _dk_tasks,
    _dk_summary,
    needs_seed=lambda p: p["samples"] > 0,
    oracle="number-basis propagator of the antinormal operator; mc rows use the exact finite-lattice chain",
)


def _check_fk(p):
    if p["samples"] < 100:
        raise ValueError("numerics.samples: must be >= 100")
    if p["block_size"] < 1:
        raise ValueError("numerics.block_size: must be >= 1")
    if any(N < 1 for N in p["N_list"]):
        raise ValueError("numerics.N_list: at least one time step is needed")


def _check_dk(p):
    if p["samples"] and p["samples"] < 100:
        raise ValueError("numerics.samples: must be 0 or >= 100")
    if p["block_size"] < 1:
        raise ValueError("numerics.block_size: must be >= 1")
    if p["mc_N"] < 1:
        raise ValueError("numerics.mc_N: must be >= 1")


def _check_cameron(p):
    if not complex(p["lambda"]).real > 0:
        raise ValueError("physics.lambda: real part must be positive")
    if any(N < 1 for N in p["N_list"]):
        raise ValueError("numerics.N_list: Cameron chains need N >= 1")


def _check_symbol(p):
    try:
        parse_symbol(p["H"])
    except ValueError as exc:
        raise ValueError(f"physics.H: {exc}") from None


def _check_potential(p):
    try:
        parse_potential(p["V"])
    except ValueError as exc:
        raise ValueError(f"physics.V: {exc}") from None


POST_CHECKS = {
    "fk": lambda p: (_check_potential(p), _check_fk(p)),
    "lattice": _check_potential,
    "cameron": _check_cameron,
    "ps-lattice": _check_symbol,
    "cs": _check_symbol,
    "dk": lambda p: (_check_symbol(p), _check_dk(p)),
}

REGISTRY = {s.name: s for s in (LATTICE, FK, CAMERON, ITO, PS_LATTICE, CS, DK)}


def get_scheme(name: str) -> Scheme:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigError(f"experiment.scheme: unknown scheme {name!r}; choose from {sorted(REGISTRY)}") from None


def describe_schemes() -> str:
    lines = []
    for s in REGISTRY.values():
        lines.append(f"{s.name}: {s.description}")
        for f in s.fields:
            tag = "required" if f.required else f"default {f.default!r}" if f.default is not None else "optional"
            lines.append(f"    {f.label:<22} {tag}{'; ' + f.doc if f.doc else ''}")
    return "\n".join(lines)


def backend_label() -> str:
    return kernels.backend_name()


def schema_document() -> dict:
    """The shipped ``schema.json``: fixed CSV columns and oracle notes per scheme."""
    return {name: {"description": s.description, "oracle": s.oracle,
                   "columns": [{"name": c, "type": k} for c, k in s.columns]}
            for name, s in REGISTRY.items()}
