"""Parameter sweeps over a :class:`~robust_readout.config.SweepConfig` and their serialisation."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

from . import approx as ap
from .classify import exact_infidelity, monte_carlo_infidelity
from .config import SweepConfig
from .enumeration import BudgetExceededError
from .hmm import HmmModel, heating_model, multilevel_model
from .info import fano_infidelity_bound

__all__ = ["COLUMNS", "NumericError", "grid_points", "run_sweep", "format_rows"]

COLUMNS = (
    "scheme", "strategy", "L", "m", "N", "delta", "kd_tau", "ku_tau", "alpha", "M",
    "p0_given_L", "pL_given_0", "infidelity", "stderr", "valid_flags", "elapsed_ms",
)


class NumericError(RuntimeError):
    """A computed value was NaN or infinite."""


def grid_points(config: SweepConfig) -> List[Dict[str, Any]]:
    """Cartesian product of the grid, lexicographic in axis order; ``m >= L`` points dropped."""
    axes = config.axes or tuple(config.grid)
    points = []
    for values in itertools.product(*(config.grid[a] for a in axes)):
        point = dict(zip(axes, values))
        if "m" in point and point["m"] >= point["L"]:
            continue
        points.append(point)
    return points


def _model(scheme: str, p: Dict[str, Any]) -> HmmModel:
    if scheme == "multilevel":
        return multilevel_model(p["L"], p["m"], p["N"], p["delta"], p["kd_tau"], p["ku_tau"])
    return heating_model(p["L"], p.get("m", 0), p["N"], p["delta"], p["kd_tau"], p.get("ku_tau", 0.0))


def _approx(scheme: str, p: Dict[str, Any]):
    """``(P(0|L), P(L|0), leading-order infidelity)``; the pair is ``None`` where no full form exists."""
    L, N, delta, kd = p["L"], p["N"], p["delta"], p["kd_tau"]
    if scheme == "decay":
        p0L, pL0 = ap.approx_decay_full(L, N, delta, kd)
        return p0L, pL0, ap.approx_decay_leading(L, N, delta, kd)
    if scheme == "heating":
        p0L, pL0 = ap.approx_heating_full(L, p["m"], N, delta, kd, p["ku_tau"])
        return p0L, pL0, ap.approx_heating_leading(L, p["m"], N, delta, kd, p["ku_tau"])
    if scheme == "multilevel":
        return None, None, ap.approx_multilevel_leading(L, p["m"], N, delta, kd, p["ku_tau"])
    if scheme == "cat":
        return None, None, 1 - ap.approx_fidelity_cat(L, N, delta, kd, p["alpha"])
    return None, None, 1 - ap.approx_fidelity_binomial(L, p["M"], N, delta, kd)


def _evaluate(config: SweepConfig, index: int, point: Dict[str, Any], strategy: str, timing: bool) -> Dict[str, Any]:
    row: Dict[str, Any] = {c: None for c in COLUMNS}
    row.update(scheme=config.scheme, strategy=strategy, **point)
    if config.scheme == "decay":
        row["m"], row["ku_tau"] = 0, 0.0
    start = time.perf_counter()
    try:
        if strategy == "approx":
            p0L, pL0, leading = _approx(config.scheme, point)
            row.update(p0_given_L=p0L, pL_given_0=pL0, infidelity=leading)
            kd = point.get("kd_tau", 0.0)
            if config.scheme == "cat":
                kd *= point["alpha"] ** 2
            elif config.scheme == "binomial":
                kd *= point["L"] * point["M"] / 2
            flags = ap.validity_flags(point["N"], point["delta"], kd, point.get("ku_tau", 0.0))
            row["valid_flags"] = ";".join(flags)
        elif strategy == "fano":
            row["infidelity"] = fano_infidelity_bound(_model(config.scheme, point), budget=config.budget)
        elif strategy == "mc":
            # majority voting for the sampled check; per-row seeds keep rows independent
            model = _model(config.scheme, point)
            rep = monte_carlo_infidelity(model, "majority", config.mc_trials, seed=(config.seed, index))
            row.update(p0_given_L=rep.p_0_given_L, pL_given_0=rep.p_L_given_0,
                       infidelity=rep.infidelity, stderr=rep.stderr)
        else:
            rep = exact_infidelity(_model(config.scheme, point), strategy, budget=config.budget)
            row.update(p0_given_L=rep.p_0_given_L, pL_given_0=rep.p_L_given_0, infidelity=rep.infidelity)
    except BudgetExceededError as exc:
        row["valid_flags"] = f"error: {exc}"
    if timing:
        row["elapsed_ms"] = (time.perf_counter() - start) * 1e3
    for key in ("p0_given_L", "pL_given_0", "infidelity", "stderr"):
        value = row[key]
        if value is not None and not math.isfinite(value):
            raise NumericError(f"non-finite {key}={value} at {point} ({strategy})")
    return row


def run_sweep(config: SweepConfig, threads: Optional[int] = None, timing: bool = False) -> List[Dict[str, Any]]:
    """One row per grid point per strategy, in grid order regardless of ``threads``.

    ``elapsed_ms`` is only filled when ``timing`` is set, so that repeated
    runs produce identical output.
    """
    threads = config.threads if threads is None else threads
    tasks = [
        (i, point, strategy)
        for i, point in enumerate(grid_points(config))
        for strategy in config.strategies
    ]

    def run(task):
        return _evaluate(config, task[0], task[1], task[2], timing)

    if threads <= 1:
        return [run(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, tasks))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def format_rows(rows: List[Dict[str, Any]], fmt: str = "csv") -> str:
    """Serialise rows as CSV (fixed column order) or as a JSON document."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "structured-text":
        return json.dumps({"columns": list(COLUMNS), "rows": [{c: row[c] for c in COLUMNS} for row in rows]},
                          indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
