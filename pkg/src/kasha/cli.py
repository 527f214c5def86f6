"""Command-line entry point: ``kasha <experiment> [--config FILE] [--out DIR] ...``."""

from __future__ import annotations

import argparse
import sys

from .config import Config, ConfigError
from .dynamics import SizingError
from .experiments import EXPERIMENTS, TRAJECTORY_EXPERIMENTS, run_experiment
from .units import UnitError

DESCRIPTIONS = {
    "band": "collective shifts and decay rates of the exciton band",
    "rates": "pairwise transfer rates out of every collective state",
    "kasha-dynamics": "populations of all collective states after exciting the bright state",
    "scaling-scan": "Kasha rate against the number of vibrational modes",
    "mcwf-vs-rate": "quantum-jump decay of the bright state against the rate model",
    "disorder": "bright-state decay under static frequency disorder",
    "table1": "Kasha timescales of the bundled dyes",
}


def _add_common(p: argparse.ArgumentParser, trajectories: bool) -> None:
    p.add_argument("--config", metavar="FILE", help="sectioned key = value configuration")
    p.add_argument("--out", metavar="DIR", default=None, help="output directory (default: results/<experiment>)")
    p.add_argument("--seed", type=int, default=None, help="override [run] seed")
    p.add_argument("--workers", type=int, default=None, help="override [run] workers (processes)")
    if trajectories:
        p.add_argument("--n-traj", type=int, default=None, help="override [dynamics] n_traj")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kasha",
        description="Exciton bands, Kasha relaxation rates and quantum-jump dynamics of H-aggregates.",
    )
    sub = parser.add_subparsers(dest="command", metavar="experiment")
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=DESCRIPTIONS[name], description=DESCRIPTIONS[name])
        _add_common(p, name in TRAJECTORY_EXPERIMENTS)
    p = sub.add_parser("run", help="run the experiment named in the configuration's [run] section")
    _add_common(p, True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print(f"kasha: error: choose an experiment: {', '.join(EXPERIMENTS)}", file=sys.stderr)
        return 2
    try:
        cfg = Config.from_file(args.config) if args.config else Config()
        name = None if args.command == "run" else args.command
        if name is None and (args.config is None or cfg.is_empty()):
            raise ConfigError(f"empty configuration; choose an experiment from {', '.join(EXPERIMENTS)}")
        if name is not None:
            cfg.set("run", "experiment", name)
        experiment = cfg.get_str("run", "experiment")
        if args.seed is not None:
            cfg.set("run", "seed", args.seed)
        if args.workers is not None:
            cfg.set("run", "workers", args.workers)
        if getattr(args, "n_traj", None) is not None:
            if experiment not in TRAJECTORY_EXPERIMENTS:
                raise ConfigError(f"--n-traj does not apply to experiment {experiment!r}")
            cfg.set("dynamics", "n_traj", args.n_traj)
        out = args.out or f"results/{experiment}"
        result = run_experiment(cfg, out, name)
    except (ConfigError, UnitError, SizingError) as exc:
        print(f"kasha: error: {exc}", file=sys.stderr)
        return 2
    for key, value in result.summary.items():
        print(f"{key} = {value}")
    print(f"wrote {', '.join(f'{t}.csv' for t in result.tables)} and metadata.ini to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
