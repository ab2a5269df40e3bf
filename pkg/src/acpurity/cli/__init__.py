"""Command-line interface: ``acpurity run|preset|validate``.

Exit codes: 0 success, 1 configuration error, 2 runtime error. Diagnostics
go to standard error, results to files (or standard output for
``preset --emit-config`` and ``validate``).
"""
from __future__ import annotations

import argparse
import sys
import warnings

from ..analytics import ValidityWarning
from ..bath import WeakCouplingWarning
from .config import ConfigError, ExperimentConfig, dump_config, load_config, parse_config
from .presets import PRESETS, preset
from .runner import format_value, run_experiment, validate_point

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

__all__ = ["main", "ConfigError", "ExperimentConfig", "load_config", "parse_config", "preset", "run_experiment", "validate_point"]


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors, not runtime failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(top: bool) -> argparse.ArgumentParser:
    # accepted before and after the subcommand; only the top level sets defaults
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", default=None if top else argparse.SUPPRESS, help="CSV path, overrides output_path from the config")
    p.add_argument("--threads", type=int, default=1 if top else argparse.SUPPRESS, help="grid points evaluated concurrently (default 1)")
    return p


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="acpurity", description="Purity and fidelity of AC-driven qubit gates.", parents=[_common(True)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    late = [_common(False)]

    r = sub.add_parser("run", help="run an experiment config and write its CSV", parents=late)
    r.add_argument("config")

    pr = sub.add_parser("preset", help="run a named preset, or print its config", parents=late)
    pr.add_argument("name", choices=sorted(PRESETS))
    pr.add_argument("--emit-config", action="store_true", help="print the preset as YAML instead of running it")

    v = sub.add_parser("validate", help="compare analytic and numeric rates for a single_point config", parents=late)
    v.add_argument("config")
    return p


def _err(msg: str):
    print(f"acpurity: {msg}", file=sys.stderr)


def _run(cfg: ExperimentConfig, args) -> int:
    summary = run_experiment(cfg, args.output, args.threads)
    _err(f"wrote {summary['rows']} row(s) to {summary['path']} (config {summary['config_sha256'][:12]})")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    warnings.simplefilter("once", ValidityWarning)
    warnings.simplefilter("once", WeakCouplingWarning)
    if args.threads < 1:
        _err("--threads must be >= 1")
        return EXIT_CONFIG
    try:
        if args.command == "preset":
            cfg = preset(args.name)
            if args.emit_config:
                text = dump_config(cfg)
                if args.output:
                    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
                        fh.write(text)
                else:
                    sys.stdout.write(text)
                return EXIT_OK
            return _run(cfg, args)
        cfg = load_config(args.config)
        if args.command == "run":
            return _run(cfg, args)
        if cfg.experiment != "single_point":
            raise ConfigError("validate needs a single_point config")
        for key, value in validate_point(cfg).items():
            print(f"{key}: {format_value(value)}")
        return EXIT_OK
    except ConfigError as exc:
        _err(f"config error: {exc}")
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report anything else as a runtime failure
        _err(f"runtime error: {type(exc).__name__}: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
