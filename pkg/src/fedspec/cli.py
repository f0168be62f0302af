"""Command-line entry point.

``fedspec run`` executes a single experiment and writes its metrics CSV;
``fedspec sweep`` repeats the run for several participation levels (one
CSV per level, named ``u<k>.csv``). Flags override config-file values.
Exit codes: 0 success, 1 config error, 2 runtime/I-O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import ScenarioConfig, load_config
from .errors import ConfigError
from .harness import run_experiment
from .metrics import write_csv, write_rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fedspec",
        description="Deterministic simulator of federated multi-agent RL for dynamic spectrum access.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and emit a metrics CSV")
    run.add_argument("--config", required=True, help="path to a flat JSON config file")
    run.add_argument("--seed", type=int, default=None, help="override the config seed")
    run.add_argument("--mode", choices=["fl", "dl"], default=None, help="override the config mode")
    run.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    run.add_argument("--episodes", type=int, default=None, help="override the episode count")
    run.add_argument("--participants", type=int, default=None, help="override participants per round")

    sweep = sub.add_parser("sweep", help="run the participation sweep, one CSV per U value")
    sweep.add_argument("--config", required=True, help="path to a flat JSON config file")
    sweep.add_argument(
        "--participants",
        required=True,
        help="comma-separated participation levels, e.g. 2,4,6,8",
    )
    sweep.add_argument("--out-dir", required=True, help="directory for the u<k>.csv files")
    sweep.add_argument(
        "--seeds",
        default=None,
        help="comma-separated seeds; each u<k>.csv then holds one run per seed "
        "(default: the config seed only)",
    )
    return parser


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag}: expected comma-separated integers, got {text!r}") from exc
    if not values:
        raise ConfigError(f"{flag}: expected at least one value")
    return values


def _override(config: ScenarioConfig, **overrides) -> ScenarioConfig:
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if not overrides:
        return config
    return dataclasses.replace(config, **overrides).validate()


def _cmd_run(args: argparse.Namespace) -> None:
    config = _override(
        load_config(args.config),
        seed=args.seed,
        mode=args.mode,
        episodes=args.episodes,
        participants_u=args.participants,
    )
    records = run_experiment(config)
    if args.out is None:
        write_rows(records, sys.stdout)
    else:
        write_csv(records, args.out)


def _cmd_sweep(args: argparse.Namespace) -> None:
    base = load_config(args.config)
    u_values = _parse_int_list(args.participants, "--participants")
    seeds = _parse_int_list(args.seeds, "--seeds") if args.seeds else [base.seed]
    # Validate every run configuration before any work starts.
    configs = {
        u: [_override(base, participants_u=u, seed=seed) for seed in seeds] for u in u_values
    }
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for u in u_values:
        def records(run_configs=configs[u]):
            for run_config in run_configs:
                yield from run_experiment(run_config)

        write_csv(records(), out_dir / f"u{u}.csv")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            _cmd_run(args)
        else:
            _cmd_sweep(args)
    except ConfigError as exc:
        print(f"fedspec: config error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"fedspec: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
