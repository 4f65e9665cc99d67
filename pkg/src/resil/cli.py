"""Command-line front end.

    resil simulate run.cfg     # design from config -> r.csv, summary.json
    resil stats run.cfg        # r.csv -> curve.csv, by_hour.csv, by_month.csv
    resil size run.cfg         # grid search -> design.json
    resil assess run.cfg       # size, then simulate and stats with that design

Every config key can be overridden on the command line, e.g.
``--fuel_available_gal 300`` or ``--fuel-available-gal 300``.
Exit codes: 0 success, 2 invalid input, 3 infeasible sizing.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional

from resil.config import KEYS, RunConfig
from resil.dispatch import SystemDesign
from resil.errors import ConfigError, ResilError
from resil.sizing import SizingResult, size_system
from resil.stats import aggregate, by_hour_csv, by_month_csv, curve_csv, survival_probability
from resil.sweep import SurvivalSeries, parse_survival_csv, simulate_year, summary, survival_csv
from resil.timebase import format_number

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


def write_atomic(files: dict[Path, str]):
    """Write every file to a temp name first, then rename them all into place."""
    staged = []
    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            staged.append((tmp, path))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def summary_json(series: SurvivalSeries, cfg: RunConfig) -> str:
    out = summary(series)
    out["prob_at"] = {
        format_number(d): survival_probability(series, d, comparator=cfg.comparator)
        for d in cfg.prob_durations
    }
    return _json(out)


def stats_files(series: SurvivalSeries, cfg: RunConfig) -> dict[Path, str]:
    agg = aggregate(series, cfg.comparator)
    out = cfg.output_dir
    return {
        out / "curve.csv": curve_csv(agg.overall),
        out / "by_hour.csv": by_hour_csv(agg),
        out / "by_month.csv": by_month_csv(agg),
    }


def run_year(design: SystemDesign, cfg: RunConfig) -> SurvivalSeries:
    return simulate_year(cfg.site_inputs(), design, cfg.timebase, workers=cfg.get("threads"))


def simulate_files(series: SurvivalSeries, cfg: RunConfig) -> dict[Path, str]:
    out = cfg.output_dir
    return {out / "r.csv": survival_csv(series), out / "summary.json": summary_json(series, cfg)}


def _size(cfg: RunConfig) -> SizingResult:
    return size_system(cfg.sizing_spec(), cfg.window(), cfg.site_inputs(), cfg.timebase)


def cmd_simulate(cfg: RunConfig) -> int:
    write_atomic(simulate_files(run_year(cfg.design(), cfg), cfg))
    return EXIT_OK


def cmd_stats(cfg: RunConfig) -> int:
    path = cfg.r_file
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("r_file", f"cannot read {path}: {exc.strerror}") from None
    try:
        series = parse_survival_csv(text, cfg.timebase)
    except ResilError as exc:
        raise ConfigError("r_file", str(exc)) from None
    write_atomic(stats_files(series, cfg))
    return EXIT_OK


def cmd_size(cfg: RunConfig) -> int:
    result = _size(cfg)
    write_atomic({cfg.output_dir / "design.json": _json(result.to_json())})
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_assess(cfg: RunConfig) -> int:
    result = _size(cfg)
    files = {cfg.output_dir / "design.json": _json(result.to_json())}
    if not result.feasible:
        write_atomic(files)
        return EXIT_INFEASIBLE
    series = run_year(result.design, cfg)
    files.update(simulate_files(series, cfg))
    files.update(stats_files(series, cfg))
    write_atomic(files)
    return EXIT_OK


COMMANDS = {
    "simulate": (cmd_simulate, "simulate outages from every step with a fixed design"),
    "stats": (cmd_stats, "survival-probability curves from an r.csv file"),
    "size": (cmd_size, "least-cost design surviving the configured outage window"),
    "assess": (cmd_assess, "size, then simulate and compute stats for that design"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resil", description="Year-long outage survival analysis for DER systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", nargs="?", help="flat key = value configuration file")
        for key in KEYS:
            flags = [f"--{key}"]
            if "_" in key:
                flags.append(f"--{key.replace('_', '-')}")
            p.add_argument(*flags, dest=key, metavar="VALUE", default=None)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k in KEYS and v is not None}
    func = COMMANDS[args.command][0]
    try:
        cfg = RunConfig.from_sources(args.config, overrides)
        code = func(cfg)
    except ResilError as exc:
        print(f"resil {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if code == EXIT_INFEASIBLE:
        print(f"resil {args.command}: no candidate design survives the outage window", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
