"""Command-line driver: fig1 | fig2 | fig3 | gamma-dump | evolve.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import __version__
from .config import ExperimentConfig, default_config, parse_config
from .errors import ConfigError, NumericsError
from .experiments import (
    resolve_output_dir,
    run_evolve,
    run_fig1,
    run_fig2,
    run_fig3,
    run_gamma_dump,
)
from .serialize import load_correlation_set

_FIG_IDS = {
    "fig1": "fig1-rate-vs-E",
    "fig2": "fig2-rate-vs-a",
    "fig3": "fig3-fidelity",
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON experiment config")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--seed", type=int, metavar="U64", help="override the config seed")
    parser.add_argument("--threads", type=int, default=1, metavar="N", help="sweep worker count")
    parser.add_argument("--tol", type=float, metavar="FLOAT", help="override integrator rtol")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdnoise",
        description="Phonon-induced decoherence experiments for a stacked quantum-dot register",
    )
    parser.add_argument("--version", action="version", version=f"qdnoise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fig1", "single-dot scattering rate vs level splitting"),
        ("fig2", "dimer-singlet decoherence rate vs inter-dot spacing"),
        ("fig3", "fidelity trajectories at spacings A/B/C"),
        ("gamma-dump", "compute and save the bath correlation matrices as JSON"),
        ("evolve", "evolve the configured initial state to a trajectory CSV"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "evolve":
            p.add_argument(
                "--matrices",
                metavar="PATH",
                help="correlation-set JSON to evolve on (saved or synthetic)",
            )
    return parser


def _load_config(args, experiment_id: str | None) -> ExperimentConfig:
    if args.config:
        config = parse_config(args.config, require_experiment=experiment_id is not None)
        if experiment_id is not None:
            if config.experiment is None:
                config = dataclasses.replace(config, experiment=experiment_id)
            elif config.experiment != experiment_id:
                raise ConfigError(
                    f"config experiment {config.experiment!r} does not match subcommand "
                    f"({experiment_id})"
                )
    else:
        config = default_config(experiment_id)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"--seed must be nonnegative, got {args.seed}")
        config = dataclasses.replace(config, seed=args.seed)
    if args.tol is not None:
        if args.tol <= 0:
            raise ConfigError(f"--tol must be > 0, got {args.tol}")
        config = dataclasses.replace(
            config, integrator=dataclasses.replace(config.integrator, rtol=args.tol)
        )
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in _FIG_IDS:
            config = _load_config(args, _FIG_IDS[args.command])
            out = resolve_output_dir(config, args.out)
            runner = {"fig1": run_fig1, "fig2": run_fig2, "fig3": run_fig3}[args.command]
            runner(config, out, threads=max(1, args.threads))
            print(f"{args.command}: wrote results to {out}")
        elif args.command == "gamma-dump":
            config = _load_config(args, None)
            out = resolve_output_dir(config, args.out)
            path = run_gamma_dump(config, out)
            print(f"gamma-dump: wrote {path}")
        elif args.command == "evolve":
            config = _load_config(args, None)
            out = resolve_output_dir(config, args.out)
            matrices = None
            if args.matrices:
                try:
                    matrices = load_correlation_set(args.matrices)
                except (OSError, ValueError, KeyError) as exc:
                    raise ConfigError(f"--matrices {args.matrices}: {exc}") from exc
            run_evolve(config, out, matrices=matrices)
            print(f"evolve: wrote trajectory to {out}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
