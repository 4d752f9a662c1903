"""Sweep configuration documents: parsing, defaults, validation and presets.

A configuration is a YAML mapping::

    scheme: heating            # decay | heating | multilevel | cat | binomial
    grid:                      # axis order fixes the row order of the output
      L: [1, 2, 3]
      m: [0, 1, 2]
      N: "1..15"               # inclusive integer range, or a list
      delta: [0.02]
      kd_tau: [0.01]
      ku_tau: [0.005]
    strategies: [majority, mle, approx]
    mc_trials: 100000
    seed: 0
    threads: 1
    format: csv                # csv | structured-text
    output: null               # path, or null for stdout

Validation is all-or-nothing: every problem found is reported together.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .enumeration import ENUMERATION_BUDGET

__all__ = [
    "SCHEMES",
    "SCHEME_AXES",
    "SCHEME_STRATEGIES",
    "ConfigError",
    "SweepConfig",
    "validate_config",
    "load_config",
    "load_preset",
    "PRESETS",
]

SCHEMES = ("decay", "heating", "multilevel", "cat", "binomial")
FORMATS = ("csv", "structured-text")
PRESETS = ("fig3", "fig5", "fig6")

INT_AXES = ("L", "m", "N", "M")
FLOAT_AXES = ("delta", "kd_tau", "ku_tau", "alpha")

SCHEME_AXES = {
    "decay": ("L", "N", "delta", "kd_tau"),
    "heating": ("L", "m", "N", "delta", "kd_tau", "ku_tau"),
    "multilevel": ("L", "m", "N", "delta", "kd_tau", "ku_tau"),
    "cat": ("L", "N", "delta", "kd_tau", "alpha"),
    "binomial": ("L", "M", "N", "delta", "kd_tau"),
}

_HMM_STRATEGIES = ("majority", "mle", "approx", "fano", "mc")
SCHEME_STRATEGIES = {
    "decay": _HMM_STRATEGIES,
    "heating": _HMM_STRATEGIES,
    "multilevel": _HMM_STRATEGIES,
    "cat": ("approx",),
    "binomial": ("approx",),
}
ENUMERATING = ("majority", "mle", "fano")

AXIS_DEFAULTS = {
    "m": [0],
    "delta": [0.02],
    "kd_tau": [0.01],
    "ku_tau": [0.0],
    "alpha": [1.0],
    "M": [2],
}

TOP_LEVEL_KEYS = {"scheme", "grid", "strategies", "mc_trials", "seed", "threads", "format", "output", "budget"}


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists every violation found."""

    def __init__(self, errors: List[str], kind: str = "config"):
        self.errors = list(errors)
        self.kind = kind
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class SweepConfig:
    scheme: str
    grid: Dict[str, Tuple]
    strategies: Tuple[str, ...]
    mc_trials: int = 100_000
    seed: int = 0
    threads: int = 1
    format: str = "csv"
    output: Optional[str] = None
    budget: int = ENUMERATION_BUDGET
    axes: Tuple[str, ...] = field(default=())

    def as_document(self) -> Dict[str, Any]:
        """Plain mapping that :func:`validate_config` accepts back unchanged."""
        return {
            "scheme": self.scheme,
            "grid": {k: list(v) for k, v in self.grid.items()},
            "strategies": list(self.strategies),
            "mc_trials": self.mc_trials,
            "seed": self.seed,
            "threads": self.threads,
            "format": self.format,
            "output": self.output,
            "budget": self.budget,
        }


def _parse_axis(name: str, value, errors: List[str]) -> Optional[Tuple]:
    if isinstance(value, str) and ".." in value and name in INT_AXES:
        lo, _, hi = value.partition("..")
        try:
            return tuple(range(int(lo), int(hi) + 1))
        except ValueError:
            errors.append(f"grid.{name}: cannot parse range {value!r}")
            return None
    if not isinstance(value, (list, tuple)):
        value = [value]
    if not value:
        errors.append(f"grid.{name}: axis is empty")
        return None
    out = []
    for v in value:
        if isinstance(v, bool):
            errors.append(f"grid.{name}: expected a number, got {v!r}")
        elif name in INT_AXES:
            if isinstance(v, int):
                out.append(v)
            elif isinstance(v, float) and v.is_integer():
                out.append(int(v))
            else:
                errors.append(f"grid.{name}: expected an integer, got {v!r}")
        elif isinstance(v, (int, float)):
            out.append(float(v))
        else:
            errors.append(f"grid.{name}: expected a number, got {v!r}")
    return tuple(out) if len(out) == len(value) else None


def _check_ranges(scheme: str, grid: Dict[str, Tuple], errors: List[str]) -> None:
    def each(name, ok, msg):
        for v in grid.get(name, ()):
            if not ok(v):
                errors.append(f"grid.{name}={v}: {msg}")

    each("L", lambda v: v >= 1, "L must be >= 1")
    each("N", lambda v: v >= 1, "N must be >= 1")
    each("m", lambda v: v >= 0, "m must be >= 0")
    each("M", lambda v: v >= 1, "M must be >= 1")
    each("kd_tau", lambda v: 0 <= v < 1, "kd_tau must lie in [0, 1)")
    each("ku_tau", lambda v: 0 <= v < 1, "ku_tau must lie in [0, 1)")
    each("alpha", lambda v: v >= 0, "alpha must be >= 0")
    if scheme == "multilevel":
        each("delta", lambda v: 0 <= v < 1, "multi-level delta must lie in [0, 1)")
    else:
        each("delta", lambda v: 0 <= v < 0.5, "delta must lie in [0, 1/2) for a two-level ancilla")
    if "m" in grid and "L" in grid and not any(m < L for m in grid["m"] for L in grid["L"]):
        errors.append("grid: no (L, m) pair satisfies m < L")


def _check_budget(scheme: str, grid: Dict[str, Tuple], strategies, budget: int, errors: List[str]) -> None:
    if not any(s in ENUMERATING for s in strategies):
        return
    for L in grid.get("L", ()):
        alphabet = L + 1 if scheme == "multilevel" else 2
        for N in grid.get("N", ()):
            if alphabet**N > budget:
                if alphabet == 2:
                    errors.append(
                        f"budget: N={N} needs 2**{N} sequences; binary enumeration requires "
                        f"N <= {budget.bit_length() - 1}"
                    )
                else:
                    errors.append(
                        f"budget: L={L}, N={N} needs {alphabet}**{N} sequences > {budget}"
                    )


def validate_config(raw: Any, budget: Optional[int] = None) -> SweepConfig:
    """Parse a configuration mapping, filling defaults; raise :class:`ConfigError` on any problem.

    Budget violations are reported with ``kind == "budget"`` when they are
    the only problems.
    """
    errors: List[str] = []
    budget_errors: List[str] = []
    if not isinstance(raw, dict):
        raise ConfigError([f"configuration must be a mapping, got {type(raw).__name__}"])
    for key in raw:
        if key not in TOP_LEVEL_KEYS:
            errors.append(f"unknown key {key!r}")

    scheme = raw.get("scheme", "decay")
    if scheme not in SCHEMES:
        errors.append(f"scheme: must be one of {SCHEMES}, got {scheme!r}")
        scheme = None

    raw_grid = raw.get("grid", {}) or {}
    grid: Dict[str, Tuple] = {}
    if not isinstance(raw_grid, dict):
        errors.append("grid: must be a mapping of axis name to values")
        raw_grid = {}
    allowed = SCHEME_AXES.get(scheme, INT_AXES + FLOAT_AXES)
    for name, value in raw_grid.items():
        if name not in INT_AXES + FLOAT_AXES:
            errors.append(f"grid: unknown axis {name!r}")
            continue
        if name not in allowed:
            errors.append(f"grid: axis {name!r} is not used by scheme {scheme!r}")
            continue
        parsed = _parse_axis(name, value, errors)
        if parsed is not None:
            grid[name] = parsed
    for name in allowed:
        if name not in grid and name not in raw_grid:
            if name in AXIS_DEFAULTS:
                grid[name] = tuple(AXIS_DEFAULTS[name])
            else:
                errors.append(f"grid: required axis {name!r} is missing")

    strategies = raw.get("strategies", ["majority"] if scheme not in ("cat", "binomial") else ["approx"])
    if isinstance(strategies, str):
        strategies = [strategies]
    if not isinstance(strategies, list) or not strategies:
        errors.append("strategies: must be a nonempty list")
        strategies = []
    if scheme is not None:
        for s in strategies:
            if s not in SCHEME_STRATEGIES[scheme]:
                errors.append(f"strategies: {s!r} is not supported for scheme {scheme!r}")
    if len(set(strategies)) != len(strategies):
        errors.append("strategies: duplicates are not allowed")

    def integer(key, default, minimum):
        value = raw.get(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            errors.append(f"{key}: expected an integer, got {value!r}")
            return default
        if value < minimum:
            errors.append(f"{key}: must be >= {minimum}, got {value}")
        return value

    mc_trials = integer("mc_trials", 100_000, 1)
    seed = integer("seed", 0, 0)
    threads = integer("threads", 1, 1)
    limit = integer("budget", ENUMERATION_BUDGET if budget is None else budget, 1)
    if budget is not None:
        limit = budget

    fmt = raw.get("format", "csv")
    if fmt not in FORMATS:
        errors.append(f"format: must be one of {FORMATS}, got {fmt!r}")
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        errors.append(f"output: expected a path string, got {output!r}")

    if scheme is not None:
        _check_ranges(scheme, grid, errors)
        _check_budget(scheme, grid, strategies, limit, budget_errors)

    if errors or budget_errors:
        raise ConfigError(errors + budget_errors, kind="config" if errors else "budget")
    axes = tuple(name for name in raw_grid if name in grid) + tuple(n for n in allowed if n not in raw_grid)
    return SweepConfig(
        scheme=scheme,
        grid={k: grid[k] for k in axes},
        strategies=tuple(strategies),
        mc_trials=mc_trials,
        seed=seed,
        threads=threads,
        format=fmt,
        output=output,
        budget=limit,
        axes=axes,
    )


def load_config(path: str) -> Dict[str, Any]:
    """Read a YAML document; raises :class:`ConfigError` on syntax errors."""
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read {path}: {exc.strerror}"]) from exc
    except yaml.YAMLError as exc:
        raise ConfigError([f"{path}: invalid YAML: {exc}"]) from exc
    return {} if doc is None else doc


def load_preset(name: str) -> Dict[str, Any]:
    if name not in PRESETS:
        raise ConfigError([f"unknown preset {name!r}; choose from {PRESETS}"])
    text = resources.files(__package__).joinpath("presets", f"{name}.yaml").read_text()
    return yaml.safe_load(text)
