"""
Command-line entry point.

Exit codes: 0 success, 1 invalid configuration or input, 2 I/O failure.
The measurement seed is taken from ``--seed``, else ``$BINWALK_SEED``, else
the scenario file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .efficiency import crossover_steps, mesh_component_count, required_step_efficiency
from .export import compare_files, export_results, write_masks
from .fbgrid import MeasurementModel
from .runner import run_scenario
from .scenario import ConfigError, ScenarioConfig, list_presets, load_config, load_preset

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2
SEED_ENV = "BINWALK_SEED"


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="scenario JSON file")
    src.add_argument("--preset", help="built-in scenario (see `presets list`)")


def _load(args) -> ScenarioConfig:
    config = load_preset(args.preset) if args.preset else load_config(args.config)
    seed = getattr(args, "seed", None)
    if seed is None and os.environ.get(SEED_ENV):
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"${SEED_ENV}", f"not an integer: {os.environ[SEED_ENV]!r}") from None
    if seed is not None:
        try:
            config = config.with_seed(seed)
        except ValueError as exc:
            raise ConfigError("--seed", str(exc)) from None
    if getattr(args, "ideal", False):
        config = config.with_measurement(MeasurementModel.ideal())
    return config


def _cmd_run(args) -> int:
    config = _load(args)
    formats = args.format.split(",") if args.format else None
    if formats:
        bad = [f for f in formats if f not in ("csv", "json", "svg", "masks")]
        if bad:
            raise ConfigError("--format", f"unknown format(s) {bad}")
    result = run_scenario(config, workers=args.workers)
    export_results(result, args.out, formats)
    r = result.report
    print(f"{config.name}: {len(r.steps)} steps, mean similarity {r.mean:.6f} -> {args.out}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    report = compare_files(args.a, args.b)
    if args.json:
        print(json.dumps({"steps": [{"n": n, "S": S} for n, S in zip(report.steps, report.values)],
                          "mean_similarity": report.mean}, indent=2))
    else:
        for n, S in zip(report.steps, report.values):
            print(f"{n:>6d}  {S:.9f}")
        print(f"mean  {report.mean:.9f}")
    return EXIT_OK


def _cmd_masks(args) -> int:
    config = _load(args)
    paths = write_masks(config, args.out, steps=[args.step])
    print(f"wrote {len(paths)} masks to {Path(args.out) / 'masks'}")
    return EXIT_OK


def _cmd_efficiency(args) -> int:
    try:
        n = crossover_steps(args.eta, args.total)
        print(f"crossover: projection wins from step {n} (eta={args.eta}, total={args.total})")
        if args.steps is not None:
            eta_req = required_step_efficiency(args.steps, args.total)
            print(f"required step efficiency for {args.steps} steps: {eta_req:.6f}")
        if args.dim is not None:
            print(f"mesh couplers for d={args.dim}: {mesh_component_count(args.dim)}")
    except ValueError as exc:
        raise ConfigError("efficiency", str(exc)) from None
    return EXIT_OK


def _cmd_presets(args) -> int:
    for name in list_presets():
        cfg = load_preset(name)
        print(f"{name:20s} d={cfg.topology.dim:<3d} steps={len(cfg.steps)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binwalk", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a scenario and write data files")
    _add_source(p)
    p.add_argument("--out", type=Path, default=Path("binwalk-out"))
    p.add_argument("--format", help="comma-separated subset of csv,json,svg,masks")
    p.add_argument("--seed", type=int)
    p.add_argument("--ideal", action="store_true", help="disable crosstalk and shot noise")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("compare", help="per-step similarity between positions.csv files")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path, nargs="?",
                   help="second file; omit to compare p_theory with p_sim inside A")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("masks", help="export pump masks for one step")
    _add_source(p)
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--out", type=Path, default=Path("binwalk-out"))
    p.set_defaults(func=_cmd_masks)

    p = sub.add_parser("efficiency", help="loss-scaling comparison")
    p.add_argument("--eta", type=float, required=True, help="per-step efficiency of a mesh")
    p.add_argument("--total", type=float, required=True, help="end-to-end projection efficiency")
    p.add_argument("--steps", type=int)
    p.add_argument("--dim", type=int, help="also report mesh coupler count for a d×d unitary")
    p.set_defaults(func=_cmd_efficiency)

    p = sub.add_parser("presets", help="built-in scenarios")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=_cmd_presets)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
