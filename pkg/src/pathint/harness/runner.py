"""Experiment execution: validate, dispatch rows, check thresholds, persist."""

from __future__ import annotations

import math
import os
import threading
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .. import _backend
from ..errors import ConfigError
from ..numerics.rng import RandomStream
from .config import ExperimentConfig, parse_float
from .report import write_report
from .schemes import get_scheme

THRESHOLDS = {
    "max_rel_error": "every ok row with an oracle has rel_error <= value",
    "order_min": "fitted order >= value (exact fits pass)",
    "order_max": "fitted order <= value (exact fits pass)",
    "slope_max": "fitted slope <= value",
    "mc_sigma_max": "Monte Carlo deviation from its reference <= value * stderr",
}

_local = threading.local()


@dataclass
class RunResult:
    record: dict
    rows: list
    columns: tuple
    csv_path: str | None
    json_path: str | None
    passed: bool
    failures: list


def _parse_thresholds(cfg: ExperimentConfig) -> dict:
    out, errors = {}, []
    for key, raw in cfg.thresholds.items():
        if key not in THRESHOLDS:
            errors.append(f"thresholds.{key}: unknown threshold; choose from {sorted(THRESHOLDS)}")
            continue
        try:
            out[key] = parse_float(raw)
        except ValueError as exc:
            errors.append(f"thresholds.{key}: {exc}")
    if errors:
        raise ConfigError(errors)
    return out


def _run_task(task, stream, timing):
    row = {**task.params, "status": "ok", "message": ""}
    t0 = time.perf_counter()
    _local.caught = caught = []
    try:
        row.update(task.run(stream))
        if caught:
            row["message"] = "; ".join(sorted(set(caught)))
    except Exception as exc:  # recorded per row, never fatal to the batch
        row["status"] = type(exc).__name__
        row["message"] = str(exc)
        if stream is not None:
            row.update(seed=stream.seed, stream_index=stream.stream_index)
    finally:
        _local.caught = None
    if timing:
        row["runtime_s"] = time.perf_counter() - t0
    return row


def _record_warning(message, category, filename, lineno, file=None, line=None):
    """showwarning hook: attach the warning to the row running on this thread."""
    caught = getattr(_local, "caught", None)
    if caught is not None:
        caught.append(f"{category.__name__}: {message}")


def check_thresholds(th: dict, rows: list, summary: dict) -> list:
    fails = []
    bad = [r for r in rows if r.get("status") != "ok"]
    if bad:
        fails.append(f"{len(bad)} row(s) failed: " + ", ".join(sorted({r['status'] for r in bad})))
    if "max_rel_error" in th:
        worst = max((r["rel_error"] for r in rows if r.get("rel_error") is not None), default=None)
        if worst is None:
            fails.append("max_rel_error: no row carries an oracle")
        elif not worst <= th["max_rel_error"]:
            fails.append(f"max_rel_error: worst {worst:.3g} > {th['max_rel_error']:.3g}")
    fit = summary.get("fit")
    for key in ("order_min", "order_max", "slope_max"):
        if key not in th:
            continue
        if not fit:
            fails.append(f"{key}: no convergence fit available")
            continue
        if fit["exact"] and key != "slope_max":
            continue
        val = fit["slope"] if key == "slope_max" else fit["order"]
        ok = val is not None and (val >= th[key] if key == "order_min" else val <= th[key])
        if not ok:
            fails.append(f"{key}: fitted {val} vs threshold {th[key]}")
    if "mc_sigma_max" in th:
        s = summary.get("mc_sigma")
        if s is None or not s <= th["mc_sigma_max"]:
            fails.append(f"mc_sigma_max: deviation {s} sigma")
    return fails


def run_experiment(cfg: ExperimentConfig, seed=None, out_dir=None, threads=None, timing=False,
                   write=True) -> RunResult:
    """Validate ``cfg``, compute every row and write ``<out>/<name>.csv|json``.

    ``seed`` overrides ``numerics.seed``. Rows are computed on up to
    ``threads`` worker threads (``PATHINT_THREADS`` as fallback) and written
    in parameter order.
    """
    scheme = get_scheme(cfg.scheme)
    if seed is not None:
        cfg = replace(cfg, numerics={**cfg.numerics, "seed": str(seed)})
    params = scheme.validate(cfg)
    th = _parse_thresholds(cfg)
    try:
        tasks = sorted(scheme.tasks(params), key=lambda t: t.key)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    streams = []
    n_stoch = 0
    for t in tasks:
        if t.stochastic:
            streams.append(RandomStream(params["seed"], n_stoch))
            n_stoch += 1
        else:
            streams.append(None)
    if threads is None:
        env = os.environ.get("PATHINT_THREADS")
        threads = int(env) if env else 1
    _backend.set_threads(threads)
    workers = max(1, int(threads))
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = _record_warning
        if workers == 1 or len(tasks) == 1:
            rows = [_run_task(t, s, timing) for t, s in zip(tasks, streams)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(lambda ts: _run_task(ts[0], ts[1], timing), zip(tasks, streams)))
    try:
        summary = scheme.summarize(params, rows)
    except Exception as exc:
        summary = {"summary_error": f"{type(exc).__name__}: {exc}"}
    failures = check_thresholds(th, rows, summary)
    columns = scheme.columns + ((("runtime_s", "float"),) if timing else ())
    record = {"config": cfg.echo(), "scheme": scheme.name, "seed": params.get("seed"),
              "thresholds": th, "summary": _clean(summary), "passed": not failures, "failures": failures,
              "n_rows": len(rows), "n_stochastic_rows": n_stoch}
    csv_path = json_path = None
    if write:
        out = out_dir or cfg.output or "."
        csv_path, json_path = write_report(out, cfg.name, record, columns, rows)
    return RunResult(record, rows, columns, csv_path, json_path, not failures, failures)


def _clean(obj):
    """JSON-safe copy: NaN and infinities become None."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj
