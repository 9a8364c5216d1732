"""Command line front end: ``scan``, ``roundtrip`` and ``audit``.

Settings are merged as defaults < JSON config file < environment
(``FURSTENBERG_<FLAG>``) < command line flags.  Exit status is 0 on
success, 2 for configuration or input errors and 3 when a computation fails.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Callable, Optional, Sequence

from .errors import ConfigError, FurstenbergError, MeasureSpecError
from .experiments import (
    ScanConfig,
    dumps,
    run_character_audit,
    run_equidistribution_scan,
    run_roundtrip_report,
    scan_csv,
)
from .herglotz import R_LADDER

ENV_PREFIX = "FURSTENBERG_"

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE = 0, 2, 3


def _ladder(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(x) for x in text)
    return tuple(float(x) for x in str(text).split(",") if x.strip())


# name -> (converter, default)
SETTINGS: dict[str, tuple[Callable, object]] = {
    "prime_min": (int, 5),
    "prime_max": (int, 2000),
    "window": (int, 16),
    "r_ladder": (_ladder, R_LADDER),
    "out": (str, None),
    "jobs": (int, 1),
    "seed": (int, 0),
    "tol": (float, 1e-10),
    "gram_size": (int, 12),
    "measure": (str, None),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with settings (keys as flag names, '-' or '_')")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="furstenberg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", parents=[common], help="equidistribution scan over orbits of 1/p")
    scan.add_argument("--prime-min", type=int)
    scan.add_argument("--prime-max", type=int)
    scan.add_argument("--window", type=int, metavar="L")
    scan.add_argument("--r-ladder", type=_ladder, metavar="R1,R2,...")
    scan.add_argument("--jobs", type=int, metavar="N")

    rt = sub.add_parser("roundtrip", parents=[common], help="measure -> function -> measure report")
    rt.add_argument("measure", nargs="?", help='e.g. "orbit 1/5" or "mix 1/2*orbit 1/5 + 1/2*orbit 1/7"')
    rt.add_argument("--window", type=int, metavar="L")
    rt.add_argument("--r-ladder", type=_ladder, metavar="R1,R2,...")

    audit = sub.add_parser("audit", parents=[common], help="character audit of a measure")
    audit.add_argument("measure", nargs="?")
    audit.add_argument("--gram-size", type=int)
    audit.add_argument("--seed", type=int)
    audit.add_argument("--tol", type=float)

    for p in (scan, rt, audit):
        p.set_defaults(**{name: None for name in SETTINGS})
    return parser


def resolve_settings(args: argparse.Namespace, environ=os.environ) -> dict:
    """Merge defaults, config file, environment and flags (later wins)."""
    settings = {name: default for name, (_, default) in SETTINGS.items()}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in data.items():
            name = key.replace("-", "_")
            if name not in SETTINGS:
                raise ConfigError(f"unknown config key {key!r}")
            settings[name] = value
    for name in SETTINGS:
        value = environ.get(ENV_PREFIX + name.upper())
        if value is not None:
            settings[name] = value
    for name in SETTINGS:
        value = getattr(args, name, None)
        if value is not None:
            settings[name] = value
    for name, (convert, default) in SETTINGS.items():
        if settings[name] is not None and settings[name] is not default:
            try:
                settings[name] = convert(settings[name])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {name}: {settings[name]!r}") from exc
    return settings


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_measure(settings: dict) -> str:
    if not settings["measure"]:
        raise ConfigError("a measure specification is required")
    return settings["measure"]


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        s = resolve_settings(args)
        if args.command == "scan":
            config = ScanConfig(s["prime_min"], s["prime_max"], s["window"], s["r_ladder"], s["out"], s["jobs"])
            rows = run_equidistribution_scan(config)
            if not s["out"]:
                sys.stdout.write(scan_csv(rows))
        elif args.command == "roundtrip":
            report = run_roundtrip_report(_need_measure(s), s["window"], s["r_ladder"])
            _emit(dumps(report), s["out"])
        else:
            report = run_character_audit(_need_measure(s), s["gram_size"], s["seed"], s["tol"])
            _emit(dumps(report), s["out"])
    except (ConfigError, MeasureSpecError, OSError) as exc:
        logging.error("%s", exc)
        return EXIT_CONFIG
    except (FurstenbergError, ArithmeticError, ValueError) as exc:
        logging.error("%s", exc)
        return EXIT_COMPUTE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
