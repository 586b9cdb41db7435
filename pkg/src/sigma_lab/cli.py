"""Command-line entry point: ``sigma-lab <subcommand> --config cfg.json``."""

import argparse
import logging
import sys

from . import grid as tg
from .config import parse_config
from .errors import ConfigError, NumericalFailure
from .experiment import merge_reports, run_experiment, write_report

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment file")
    common.add_argument("--out", help="output directory (overrides the config)")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="sigma-lab", parents=[common],
                                     description="Decay-rate experiments for the "
                                                 "structurally damped σ-evolution model.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("simulate", "evolve Gaussian data and record solution norms"),
                       ("kernel-norms", "measure L1 norms of the kernel fields"),
                       ("audit-bounds", "audit large-band symbol estimates"),
                       ("report", "merge earlier outputs into report.json")):
        sub.add_parser(name, parents=[common], help=text, argument_default=argparse.SUPPRESS)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    threads = max(1, args.threads)
    try:
        config = parse_config(args.config) if args.config else None
        out_dir = args.out or (config.output.dir if config else None)
        if args.command == "report":
            if out_dir is None:
                raise ConfigError("report needs --out or a config with output.dir", "out")
            verdict = merge_reports(out_dir)["pass"]
        else:
            if config is None:
                raise ConfigError("--config is required", "config")
            tg.set_workers(threads)
            report = run_experiment(config, args.command, threads)
            path = write_report(report, out_dir)
            logging.getLogger(__name__).info("wrote %s", path)
            verdict = report.passed
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print("PASS" if verdict else "FAIL")
    return EXIT_PASS if verdict else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
