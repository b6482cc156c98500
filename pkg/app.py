"""
Command-line front end for SooN_S/MooN_M architecture reliability.

Subcommands:
    curve    R(t) of the given architectures (CSV, SVG or XLSX)
    compare  ranking and reference-crossing report over an enumeration
    dot      phase diagram of one architecture's Markov chain
    mc       Monte Carlo estimate with 99% confidence half-widths
    states   state probabilities of one architecture at a time point

Exit codes: 0 success, 1 computation error, 2 usage error.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv import dotenv_values

from config import Config
from utils.analysis import build_report, curve_for, enumerate_architectures, select_family
from utils.architecture import ArchitectureSpec, parse_architecture, reference_architecture
from utils.ctmc import export_dot, state_table
from utils.exceptions import ArchitectureError, ConfigError, ReliabilityError
from utils.montecarlo import RNG_ALGORITHM, McConfig, estimate_curve
from utils.plot_generator import PlotGenerator
from utils.report_writer import ReportWriter

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2

SUBCOMMAND_FORMATS = {
    "curve": ("csv", "svg", "xlsx"),
    "compare": ("csv", "svg", "xlsx"),
    "dot": ("dot",),
    "mc": ("csv", "svg"),
    "states": ("csv",),
}
GRID_SUBCOMMANDS = ("curve", "compare", "mc")


def _horizons(text: str) -> Tuple[float, ...]:
    values = tuple(float(item) for item in str(text).split(",") if item.strip())
    if not values or any(value < 0 for value in values):
        raise ValueError(f"invalid horizon list {text!r}")
    return values


# key -> (converter, Config default)
OPTIONS: Dict[str, Tuple[Callable, Callable]] = {
    "lambda_s": (float, lambda: Config.LAMBDA_S),
    "lambda_m": (float, lambda: Config.LAMBDA_M),
    "tmax": (float, lambda: Config.T_MAX),
    "points": (int, lambda: Config.POINTS),
    "solver": (str, lambda: Config.SOLVER),
    "runs": (int, lambda: Config.MC_RUNS),
    "seed": (int, lambda: Config.MC_SEED),
    "max_sensors": (int, lambda: Config.MAX_SENSORS),
    "max_mcus": (int, lambda: Config.MAX_MCUS),
    "out": (str, lambda: None),
    "format": (str, lambda: None),
    "eps": (float, lambda: Config.EPS),
    "horizons": (_horizons, lambda: Config.HORIZONS),
    "workers": (int, lambda: Config.WORKERS),
    "sensors": (int, lambda: None),
    "mcus": (int, lambda: None),
}


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    architectures: Tuple[str, ...]
    lambda_s: float
    lambda_m: float
    tmax: float
    points: int
    solver: str
    runs: int
    seed: int
    max_sensors: int
    max_mcus: int
    out: Optional[str]
    format: str
    eps: float
    horizons: Tuple[float, ...]
    workers: int
    sensors: Optional[int] = None
    mcus: Optional[int] = None
    at: float = 0.0

    def validate(self) -> "CliConfig":
        if self.lambda_s <= 0 or self.lambda_m <= 0:
            raise ConfigError("--lambda-s and --lambda-m must be positive")
        if self.format not in SUBCOMMAND_FORMATS[self.subcommand]:
            raise ConfigError(
                f"{self.subcommand} supports --format {', '.join(SUBCOMMAND_FORMATS[self.subcommand])}"
            )
        if self.subcommand in GRID_SUBCOMMANDS:
            if self.points < 2:
                raise ConfigError("--points must be at least 2")
            if self.tmax <= 0:
                raise ConfigError("--tmax must be positive")
        if self.solver not in Config.SOLVERS:
            raise ConfigError(f"--solver must be one of {', '.join(Config.SOLVERS)}")
        if self.runs < 1:
            raise ConfigError("--runs must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        if self.max_sensors < 1 or self.max_mcus < 1:
            raise ConfigError("--max-sensors and --max-mcus must be at least 1")
        if not 0 < self.eps <= 1e-6:
            raise ConfigError("--eps must lie in (0, 1e-6]")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        if self.sensors is not None and not 1 <= self.sensors <= self.max_sensors:
            raise ConfigError("--sensors must lie between 1 and --max-sensors")
        if self.mcus is not None and not 1 <= self.mcus <= self.max_mcus:
            raise ConfigError("--mcus must lie between 1 and --max-mcus")
        if self.at < 0:
            raise ConfigError("--at must be non-negative")
        if self.subcommand in ("curve", "mc") and not self.architectures:
            raise ConfigError(f"{self.subcommand} needs at least one architecture")
        if self.subcommand in ("dot", "states") and len(self.architectures) != 1:
            raise ConfigError(f"{self.subcommand} takes exactly one architecture")
        return self

    @property
    def t_grid(self) -> List[float]:
        return [float(t) for t in np.linspace(0.0, self.tmax, self.points)]

    def specs(self) -> List[ArchitectureSpec]:
        return [parse_architecture(label, self.lambda_s, self.lambda_m) for label in self.architectures]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    common.add_argument("--lambda-s", type=float, help="sensor failure rate, 1/h")
    common.add_argument("--lambda-m", type=float, help="MCU failure rate, 1/h")
    common.add_argument("--tmax", type=float, help="time horizon, h")
    common.add_argument("--points", type=int, help="number of grid points")
    common.add_argument("--solver", choices=Config.SOLVERS)
    common.add_argument("--runs", type=int, help="Monte Carlo runs")
    common.add_argument("--seed", type=int, help="Monte Carlo seed")
    common.add_argument("--max-sensors", type=int)
    common.add_argument("--max-mcus", type=int)
    common.add_argument("--eps", type=float, help="uniformization truncation tolerance")
    common.add_argument("--horizons", type=_horizons, help="comma-separated report horizons, h")
    common.add_argument("--workers", type=int, help="threads for Monte Carlo chunks and compare evaluation")
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=Config.FORMATS)

    parser = argparse.ArgumentParser(
        prog="failop-reliability",
        description="Reliability of SooN_S/MooN_M sensor/MCU architectures",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    curve = subparsers.add_parser("curve", parents=[common], help="R(t) curves")
    curve.add_argument("architectures", nargs="+", metavar="SooN/MooN")

    compare = subparsers.add_parser("compare", parents=[common], help="comparison report over an enumeration")
    compare.add_argument("--sensors", type=int, help="keep only architectures with exactly this many sensors")
    compare.add_argument("--mcus", type=int, help="keep only architectures with exactly this many MCUs")

    dot = subparsers.add_parser("dot", parents=[common], help="Markov chain phase diagram")
    dot.add_argument("architectures", nargs=1, metavar="SooN/MooN")

    mc = subparsers.add_parser("mc", parents=[common], help="Monte Carlo estimate")
    mc.add_argument("architectures", nargs="+", metavar="SooN/MooN")

    states = subparsers.add_parser("states", parents=[common], help="state probabilities")
    states.add_argument("architectures", nargs=1, metavar="SooN/MooN")
    states.add_argument("--at", type=float, default=0.0, help="time point, h")
    return parser


def read_config_file(path: str) -> Dict[str, str]:
    """Parse key=value lines; unknown or valueless keys are errors"""
    try:
        with open(path, encoding="utf-8") as handle:
            values = dotenv_values(stream=handle)
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e

    unknown = sorted(set(values) - set(Config.CONFIG_FILE_KEYS))
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    missing = sorted(key for key, value in values.items() if value is None)
    if missing:
        raise ConfigError(f"Config keys without a value in {path}: {', '.join(missing)}")
    return dict(values)


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """Flag > config file > environment/Config default"""
    file_values = read_config_file(args.config) if args.config else {}
    resolved = {}
    for key, (convert, default) in OPTIONS.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            try:
                resolved[key] = convert(file_values[key])
            except ValueError as e:
                raise ConfigError(f"Bad value for {key}: {file_values[key]!r}") from e
        else:
            resolved[key] = default()

    if resolved["format"] is None:
        resolved["format"] = SUBCOMMAND_FORMATS[args.subcommand][0]
    return CliConfig(
        subcommand=args.subcommand,
        architectures=tuple(getattr(args, "architectures", None) or ()),
        at=getattr(args, "at", 0.0),
        **resolved,
    ).validate()


class ReliabilityApp:
    """Runs one subcommand and writes its artifact"""

    def __init__(self):
        self.report_writer = ReportWriter()
        self.plot_generator = PlotGenerator()
        self.logger = logging.getLogger("ReliabilityApp")

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_USAGE

        _configure_logging(args.verbose)
        try:
            Config.validate_config()
            config = resolve_config(args)
            specs = config.specs()
        except (ArchitectureError, ConfigError) as e:
            self.logger.error("%s", e)
            return EXIT_USAGE

        command = getattr(self, f"cmd_{config.subcommand}")
        try:
            content = command(config, specs)
            self.report_writer.write_output(content, config.out)
        except (ReliabilityError, ArithmeticError, ValueError, OSError) as e:
            self.logger.error("%s failed: %s", config.subcommand, e)
            return EXIT_COMPUTE
        return EXIT_OK

    def cmd_curve(self, config: CliConfig, specs: List[ArchitectureSpec]):
        """R(t) per architecture, columns in argument order"""
        grid = config.t_grid
        curves = [curve_for(spec, grid, config.solver, config.eps) for spec in specs]

        if config.format == "svg":
            reference = curve_for(reference_architecture(config.lambda_s, config.lambda_m), grid, config.solver, config.eps)
            fig = self.plot_generator.create_reliability_plot(curves, reference=reference)
            return self.plot_generator.export_plot_as_svg(fig)

        frame = self.report_writer.curves_to_frame(curves)
        if config.format == "xlsx":
            return self.report_writer.to_xlsx_bytes(frame, sheet_name="curves")
        return self.report_writer.to_csv_text(frame)

    def cmd_compare(self, config: CliConfig, specs: List[ArchitectureSpec]):
        """Enumerate, evaluate and rank against 1oo1/1oo1"""
        candidates = select_family(
            enumerate_architectures(config.max_sensors, config.max_mcus, config.lambda_s, config.lambda_m),
            config.sensors,
            config.mcus,
        )
        reference = reference_architecture(config.lambda_s, config.lambda_m)
        report = build_report(
            candidates, config.t_grid, reference, config.horizons, config.solver, config.eps, workers=config.workers
        )

        if config.format == "svg":
            fig = self.plot_generator.create_reliability_plot(
                report.curves,
                reference=report.reference_curve,
                title=_family_title(config),
            )
            return self.plot_generator.export_plot_as_svg(fig)

        frame = self.report_writer.report_to_frame(report)
        if config.format == "xlsx":
            return self.report_writer.to_xlsx_bytes(frame, sheet_name="compare")
        return self.report_writer.to_csv_text(frame)

    def cmd_dot(self, config: CliConfig, specs: List[ArchitectureSpec]):
        return export_dot(specs[0])

    def cmd_mc(self, config: CliConfig, specs: List[ArchitectureSpec]):
        mc_config = McConfig(runs=config.runs, seed=config.seed, t_grid=tuple(config.t_grid))
        estimates = [estimate_curve(spec, mc_config, workers=config.workers) for spec in specs]

        if config.format == "svg":
            fig = self.plot_generator.create_estimate_plot(estimates)
            return self.plot_generator.export_plot_as_svg(fig)

        metadata = {"seed": config.seed, "runs": config.runs, "rng": RNG_ALGORITHM}
        for estimate in estimates:
            metadata[f"mean_failure_time_hours:{estimate.label}"] = repr(estimate.mean_failure_time)
        return self.report_writer.to_csv_text(self.report_writer.estimates_to_frame(estimates), metadata)

    def cmd_states(self, config: CliConfig, specs: List[ArchitectureSpec]):
        return self.report_writer.to_csv_text(state_table(specs[0], config.at, config.eps))


def _family_title(config: CliConfig) -> str:
    sensors = f"N_S={config.sensors}" if config.sensors else f"N_S<={config.max_sensors}"
    mcus = f"N_M={config.mcus}" if config.mcus else f"N_M<={config.max_mcus}"
    return f"{sensors}, {mcus}"


def _configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, str(Config.LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(ReliabilityApp().run(argv))


if __name__ == "__main__":
    main()
