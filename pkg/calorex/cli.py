"""Command-line front end: ``calorex solve|sweep|caloric|validate|figures``.

Exit codes: 0 ok, 1 usage or configuration error, 2 numerical failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import json
import logging
import sys
import time
import tomllib
from collections.abc import Sequence
from dataclasses import dataclass
from datetime import UTC, datetime
from pathlib import Path
from typing import Any, NoReturn

import numpy as np

from . import __version__
from .config import CalorexConfig
from .exceptions import (
    CalorexError,
    ConfigError,
    DegenerateRegime,
    NonConvergence,
    OutOfSupportedRange,
)
from .models import (
    EXCURSION_COLUMNS,
    STATUS_COLUMN,
    SWEEP_COLUMNS,
    CaloricMethod,
    ExcursionRow,
    ManifestEntry,
    RunManifest,
    Suite,
    SweepRow,
)
from .resources.sweeps import d_grid
from .session import CalorexSession

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

USAGE_ERRORS = (ConfigError, OutOfSupportedRange, DegenerateRegime)

FIGURE_TEMPERATURES = (0.1, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True, slots=True)
class SweepPreset:
    d_min: float = -0.5
    d_max: float = 1.0
    d_steps: int = 121
    temperatures: tuple[float, ...] = FIGURE_TEMPERATURES


@dataclass(frozen=True, slots=True)
class CrossingPreset:
    widths: tuple[float, ...] = tuple(round(0.02 * k, 10) for k in range(1, 31))
    temperatures: tuple[float, ...] = FIGURE_TEMPERATURES


# Entropy, expansion coefficient and Grueneisen ratio share one sweep dataset;
# both temperature-change figures share the crossing dataset.
FIGURE_PRESETS: dict[str, SweepPreset | CrossingPreset] = {
    "fig1": SweepPreset(),
    "fig2": SweepPreset(),
    "fig3": SweepPreset(),
    "fig4a": CrossingPreset(),
    "fig4b": CrossingPreset(),
}


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, datetime):
        return value.isoformat()
    return str(value)


def dumps(record: dict) -> str:
    """One JSON object per line."""
    return json.dumps(record, default=_json_default, sort_keys=False)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _parse_override(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        value = tomllib.loads(f"value = {raw}")["value"]
    except tomllib.TOMLDecodeError:
        value = raw
    return key.strip(), value


class _Parser(argparse.ArgumentParser):
    """Argument parser exiting with the usage code instead of argparse's 2."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="calorex",
        description="Thermodynamics and caloric effects of the anisotropic spin-1/2 chain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="TOML configuration file")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        type=_parse_override,
        default=[],
        metavar="KEY=VALUE",
        help="override a configuration key, e.g. nlie.n_points=8192",
    )
    parser.add_argument("--d-eps", type=float, help="proxy distance for d = 0+-")
    parser.add_argument("--jobs", type=int, help="worker threads (default: CPU count)")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="thermodynamics at one point")
    solve.add_argument("--delta", type=float, required=True)
    solve.add_argument("--t", type=float, required=True)
    solve.add_argument("--h", type=float, default=0.0)

    preset = SweepPreset()
    sweep = sub.add_parser("sweep", help="(d, t) sweep written as CSV")
    sweep.add_argument("--d-min", type=float, default=preset.d_min)
    sweep.add_argument("--d-max", type=float, default=preset.d_max)
    sweep.add_argument("--d-steps", type=int, default=preset.d_steps)
    sweep.add_argument(
        "--t-list", type=_parse_floats, default=list(preset.temperatures), metavar="T1,T2,..."
    )
    sweep.add_argument("--h", type=float, default=0.0)
    sweep.add_argument("--out", type=Path, required=True)

    caloric = sub.add_parser("caloric", help="caloric excursion d1 -> d2")
    caloric.add_argument("--d1", type=float, required=True)
    caloric.add_argument("--d2", type=float, required=True)
    caloric.add_argument("--t", type=float, required=True)
    caloric.add_argument(
        "--method", choices=[m.value for m in CaloricMethod], default=CaloricMethod.PAPER.value
    )

    validate = sub.add_parser("validate", help="oracle comparison suites")
    validate.add_argument("--suite", choices=[s.value for s in Suite], default=Suite.QUICK.value)

    figures = sub.add_parser("figures", help="datasets of the figure presets")
    figures.add_argument("--preset", choices=sorted(FIGURE_PRESETS), required=True)
    figures.add_argument("--out", type=Path, required=True)
    return parser


def resolve_config(args: argparse.Namespace) -> CalorexConfig:
    """Defaults < file (--config or $CALOREX_CONFIG) < --set / --d-eps."""
    config = CalorexConfig.load(args.config)
    overrides: dict[str, Any] = dict(args.overrides)
    if args.d_eps is not None:
        overrides["nlie.d_eps"] = args.d_eps
    return config.with_overrides(overrides) if overrides else config


def _arguments(args: argparse.Namespace) -> dict[str, Any]:
    return {
        key: str(value) if isinstance(value, Path) else value
        for key, value in vars(args).items()
        if key != "overrides"
    }


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def manifest_path(path: Path) -> Path:
    return path.with_name(path.stem + ".manifest.json")


def write_manifest(path: Path, manifest: RunManifest) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest._to_dict(), fh, default=_json_default, indent=2)
        fh.write("\n")
    logger.info("Wrote manifest %s", path)


def sweep_manifest(
    command: str,
    args: argparse.Namespace,
    config: CalorexConfig,
    rows: Sequence[SweepRow],
    created: datetime,
    seconds: float,
) -> RunManifest:
    return RunManifest(
        command=command,
        version=__version__,
        created=created,
        config=config.to_dict(),
        arguments=_arguments(args),
        entries=[
            ManifestEntry(
                row=i,
                d=row.d,
                t=row.t,
                status=row.status,
                diagnostics={"branch": str(row.branch), **row.diagnostics},
                seconds=row.seconds,
            )
            for i, row in enumerate(rows)
        ],
        seconds=seconds,
    )


def write_sweep(
    out: Path,
    command: str,
    args: argparse.Namespace,
    config: CalorexConfig,
    rows: Sequence[SweepRow],
    created: datetime,
    seconds: float,
) -> int:
    """Write the sweep CSV and its manifest; the status column appears only if a row failed."""
    failed = any(not row.ok for row in rows)
    header = [*SWEEP_COLUMNS, STATUS_COLUMN] if failed else list(SWEEP_COLUMNS)
    write_csv(out, header, [row._to_row(with_status=failed) for row in rows])
    write_manifest(
        manifest_path(out), sweep_manifest(command, args, config, rows, created, seconds)
    )
    logger.info("Wrote %d rows to %s", len(rows), out)
    return EXIT_NUMERICAL if failed else EXIT_OK


def write_crossings(
    out: Path,
    args: argparse.Namespace,
    config: CalorexConfig,
    rows: Sequence[ExcursionRow],
    created: datetime,
    seconds: float,
) -> int:
    write_csv(out, EXCURSION_COLUMNS, [row._to_row() for row in rows])
    manifest = RunManifest(
        command="figures",
        version=__version__,
        created=created,
        config=config.to_dict(),
        arguments=_arguments(args),
        entries=[
            ManifestEntry(row=i, d=row.dd, t=row.t, status=row.status)
            for i, row in enumerate(rows)
        ],
        seconds=seconds,
    )
    write_manifest(manifest_path(out), manifest)
    return EXIT_NUMERICAL if any(row.status != "ok" for row in rows) else EXIT_OK


async def cmd_solve(session: CalorexSession, args: argparse.Namespace) -> int:
    try:
        point = await session.points.solve(args.delta, args.t, args.h)
    except NonConvergence as e:
        record = {
            "delta": args.delta,
            "t": args.t,
            "h": args.h,
            "status": type(e).__name__,
            "message": str(e),
            "diagnostics": e.diagnostics,
            "residual_history": e.residual_history,
        }
        print(dumps(record))
        return EXIT_NUMERICAL
    print(dumps(point._to_dict()))
    return EXIT_OK


async def cmd_sweep(
    session: CalorexSession, args: argparse.Namespace, config: CalorexConfig
) -> int:
    created, start = datetime.now(UTC), time.perf_counter()
    rows = await session.sweeps.run(
        d_grid(args.d_min, args.d_max, args.d_steps), args.t_list, args.h
    )
    return write_sweep(
        args.out, "sweep", args, config, rows, created, time.perf_counter() - start
    )


async def cmd_caloric(session: CalorexSession, args: argparse.Namespace) -> int:
    result = await session.caloric.excursion(args.d1, args.d2, args.t, args.method)
    print(dumps(result._to_dict()))
    return EXIT_OK


async def cmd_validate(session: CalorexSession, args: argparse.Namespace) -> int:
    report = await session.validation.run(args.suite)
    for check in report.checks:
        print(dumps(check._to_dict()))
    print(dumps({"suite": str(report.suite), "passed": report.passed}))
    return EXIT_OK if report.passed else EXIT_VALIDATION


async def cmd_figures(
    session: CalorexSession, args: argparse.Namespace, config: CalorexConfig
) -> int:
    preset = FIGURE_PRESETS[args.preset]
    out = args.out / f"{args.preset}.csv"
    created, start = datetime.now(UTC), time.perf_counter()
    if isinstance(preset, SweepPreset):
        rows = await session.sweeps.run(
            d_grid(preset.d_min, preset.d_max, preset.d_steps), preset.temperatures
        )
        return write_sweep(
            out, "figures", args, config, rows, created, time.perf_counter() - start
        )
    crossings = await session.caloric.crossings(preset.widths, preset.temperatures)
    return write_crossings(out, args, config, crossings, created, time.perf_counter() - start)


async def run(args: argparse.Namespace, config: CalorexConfig) -> int:
    async with CalorexSession(config, jobs=args.jobs) as session:
        match args.command:
            case "solve":
                return await cmd_solve(session, args)
            case "sweep":
                return await cmd_sweep(session, args, config)
            case "caloric":
                return await cmd_caloric(session, args)
            case "validate":
                return await cmd_validate(session, args)
            case "figures":
                return await cmd_figures(session, args, config)
    raise ConfigError(f"Unknown command {args.command}")


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = resolve_config(args)
        return asyncio.run(run(args, config))
    except DegenerateRegime as e:
        print(f"calorex: {e} (the proxy distance is set with --d-eps)", file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as e:
        print(f"calorex: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CalorexError as e:
        print(f"calorex: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
