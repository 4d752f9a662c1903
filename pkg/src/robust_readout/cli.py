"""Command-line front end.

Verbs::

    robust-readout sweep <config.yaml>
    robust-readout reproduce fig3|fig5|fig6
    robust-readout bound <config.yaml>
    robust-readout mc-check <config.yaml>
    robust-readout validate <config.yaml>

Exit codes: 0 success, 2 configuration error, 3 enumeration budget error,
4 numeric failure (non-finite value, or a failed Monte Carlo check).
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

import yaml

from .config import PRESETS, ConfigError, SweepConfig, load_config, load_preset, validate_config
from .sweep import NumericError, format_rows, grid_points, run_sweep

log = logging.getLogger("robust_readout")

EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_NUMERIC = 4

_LIST_OVERRIDES = ("L", "m", "N", "M", "delta", "kd_tau", "ku_tau", "alpha")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="write the table here instead of stdout")
    common.add_argument("--format", choices=("csv", "structured-text"))
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--budget-override", type=int, metavar="SEQUENCES",
                        help="raise the enumeration budget (expert use)")
    common.add_argument("--timing", action="store_true", help="fill the elapsed_ms column")
    common.add_argument("--scheme")
    common.add_argument("--strategies", help="comma-separated list")
    common.add_argument("--mc_trials", "--mc-trials", dest="mc_trials", type=int)
    for axis in _LIST_OVERRIDES:
        flags = [f"--{axis}"]
        if "_" in axis:
            flags.append(f"--{axis.replace('_', '-')}")
        common.add_argument(*flags, dest=f"axis_{axis}", metavar="VALUES",
                            help=f"comma-separated values (or a..b) for grid axis {axis}")

    parser = argparse.ArgumentParser(prog="robust-readout", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, help_text in (
        ("sweep", "run the sweep described by a config file"),
        ("bound", "MLE infidelity and Fano lower bound over a config's grid"),
        ("mc-check", "compare exact majority-vote infidelity with Monte Carlo"),
        ("validate", "check a config file and echo it with defaults filled in"),
    ):
        p = sub.add_parser(verb, parents=[common], help=help_text)
        p.add_argument("config")
    p = sub.add_parser("reproduce", parents=[common], help="run a built-in figure preset")
    p.add_argument("preset", choices=PRESETS)
    return parser


def _parse_values(text: str):
    values = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, _, hi = part.partition("..")
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(yaml.safe_load(part))
    return values


def _apply_overrides(doc: dict, args) -> dict:
    doc = dict(doc)
    grid = dict(doc.get("grid") or {})
    for axis in _LIST_OVERRIDES:
        text = getattr(args, f"axis_{axis}")
        if text is not None:
            grid[axis] = _parse_values(text)
    if grid:
        doc["grid"] = grid
    if args.strategies is not None:
        doc["strategies"] = [s.strip() for s in args.strategies.split(",")]
    for key in ("scheme", "seed", "threads", "format", "output", "mc_trials"):
        value = getattr(args, key)
        if value is not None:
            doc[key] = value
    return doc


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summarise(config: SweepConfig, rows) -> None:
    best = {}
    for row in rows:
        if row["strategy"] in ("approx",) or row["infidelity"] is None:
            continue
        key = (row["L"], row["m"], row["strategy"])
        if key not in best or row["infidelity"] < best[key]["infidelity"]:
            best[key] = row
    for (L, m, strategy), row in sorted(best.items()):
        print(f"min over N: L={L} m={m} {strategy:<8} N*={row['N']:<3} infidelity={row['infidelity']:.6g}",
              file=sys.stderr)


def _mc_check(rows) -> bool:
    ok = True
    exact = {}
    for row in rows:
        key = tuple(row[c] for c in ("L", "m", "N", "delta", "kd_tau", "ku_tau"))
        if row["strategy"] == "majority":
            exact[key] = row
        elif row["strategy"] == "mc" and key in exact and row["infidelity"] is not None:
            ref = exact[key]
            diff = row["infidelity"] - ref["infidelity"]
            se = row["stderr"]
            z = diff / se if se else (0.0 if diff == 0 else float("inf"))
            good = abs(z) <= 5
            ok &= good
            print(f"{'ok  ' if good else 'FAIL'} L={key[0]} m={key[1]} N={key[2]} exact={ref['infidelity']:.6g} "
                  f"mc={row['infidelity']:.6g} z={z:+.2f}", file=sys.stderr)
    return ok


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        doc = load_preset(args.preset) if args.verb == "reproduce" else load_config(args.config)
        doc = _apply_overrides(doc, args)
        if args.verb == "bound":
            doc["strategies"] = ["mle", "fano"]
        elif args.verb == "mc-check":
            doc["strategies"] = ["majority", "mc"]
        if args.budget_override is not None:
            log.warning("enumeration budget overridden to %d sequences", args.budget_override)
        config = validate_config(doc, budget=args.budget_override)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET if exc.kind == "budget" else EXIT_CONFIG

    if args.verb == "validate":
        sys.stdout.write(yaml.safe_dump(config.as_document(), sort_keys=False))
        print(f"ok: {len(grid_points(config))} grid points x {len(config.strategies)} strategies",
              file=sys.stderr)
        return 0

    try:
        rows = run_sweep(config, timing=args.timing)
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _write(format_rows(rows, config.format), config.output)
    if args.verb == "reproduce":
        _summarise(config, rows)
    if any((row["valid_flags"] or "").startswith("error") for row in rows):
        return EXIT_BUDGET
    if args.verb == "mc-check" and not _mc_check(rows):
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
