import os
from typing import Callable, List
from dotenv import load_dotenv

from utils.exceptions import ConfigError

# Load environment variables from .env file
load_dotenv()

# Unparseable RELIABILITY_* values, reported by Config.validate_config()
_ENV_ERRORS: List[str] = []


def _float_list(text: str):
    return tuple(float(item) for item in text.split(",") if item.strip())


def _env(name: str, default: str, convert: Callable = str, errors: List[str] = _ENV_ERRORS):
    """Convert an environment value, falling back to the default and recording the bad value"""
    raw = os.getenv(name, default)
    try:
        return convert(raw)
    except ValueError:
        errors.append(f"{name}={raw!r}")
        return convert(default)


class Config:
    """Configuration class for the architecture reliability toolkit"""

    # Failure rates (1/h): sensors an order of magnitude below MCUs
    LAMBDA_S = _env("RELIABILITY_LAMBDA_S", "1e-5", float)
    LAMBDA_M = _env("RELIABILITY_LAMBDA_M", "1e-4", float)

    # Time grid (hours)
    T_MAX = _env("RELIABILITY_TMAX", "30000", float)
    POINTS = _env("RELIABILITY_POINTS", "301", int)
    HORIZONS = _env("RELIABILITY_HORIZONS", "10000,20000,30000", _float_list)

    # Solver Settings
    SOLVER = _env("RELIABILITY_SOLVER", "ctmc")
    SOLVERS = ("ctmc", "expm", "analytic")
    EPS = _env("RELIABILITY_EPS", "1e-12", float)

    # Monte Carlo Settings
    MC_RUNS = _env("RELIABILITY_MC_RUNS", "100000", int)
    MC_SEED = _env("RELIABILITY_MC_SEED", "20240601", int)
    WORKERS = _env("RELIABILITY_WORKERS", "1", int)

    # Enumeration caps: three sensors (camera, radar, lidar), four MCUs
    MAX_SENSORS = _env("RELIABILITY_MAX_SENSORS", "3", int)
    MAX_MCUS = _env("RELIABILITY_MAX_MCUS", "4", int)

    # Output Settings
    DATA_DIR = _env("RELIABILITY_DATA_DIR", "data")
    FORMATS = ("csv", "svg", "dot", "xlsx")
    LOG_LEVEL = _env("RELIABILITY_LOG_LEVEL", "WARNING")

    ENV_ERRORS = tuple(_ENV_ERRORS)

    # Keys accepted in a --config file
    CONFIG_FILE_KEYS = (
        "lambda_s", "lambda_m", "tmax", "points", "solver", "runs", "seed",
        "max_sensors", "max_mcus", "out", "format", "eps", "horizons", "workers",
        "sensors", "mcus",
    )

    @classmethod
    def validate_config(cls):
        """Validate that all defaults are usable"""
        if cls.ENV_ERRORS:
            raise ConfigError(f"Unparseable environment values: {', '.join(cls.ENV_ERRORS)}")
        if not cls.HORIZONS or any(h < 0 for h in cls.HORIZONS):
            raise ConfigError("RELIABILITY_HORIZONS must list non-negative hours")
        if cls.LAMBDA_S <= 0 or cls.LAMBDA_M <= 0:
            raise ConfigError("Failure rates must be positive")
        if cls.T_MAX <= 0:
            raise ConfigError("RELIABILITY_TMAX must be positive")
        if cls.POINTS < 2:
            raise ConfigError("RELIABILITY_POINTS must be at least 2")
        if not 0 < cls.EPS <= 1e-6:
            raise ConfigError("RELIABILITY_EPS must lie in (0, 1e-6]")
        if cls.MC_RUNS < 1:
            raise ConfigError("RELIABILITY_MC_RUNS must be at least 1")
        if cls.SOLVER not in cls.SOLVERS:
            raise ConfigError(f"RELIABILITY_SOLVER must be one of {', '.join(cls.SOLVERS)}")
        if cls.MAX_SENSORS < 1 or cls.MAX_MCUS < 1:
            raise ConfigError("Enumeration caps must be at least 1")

    @classmethod
    def ensure_data_dir(cls) -> str:
        os.makedirs(cls.DATA_DIR, exist_ok=True)
        return cls.DATA_DIR
