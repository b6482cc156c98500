"""
Monte Carlo estimate of R(t) from sampled component lifetimes.

Run r draws its uniforms from a Philox counter block reserved for r, so any
split of the runs into chunks, on any number of threads, sees exactly the
same numbers as a serial pass.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from utils.architecture import ArchitectureSpec, validate
from utils.curve import ReliabilityCurve, Solver
from utils.exceptions import ConfigError

logger = logging.getLogger(__name__)

Z_99 = 2.576
CHUNK_RUNS = 1 << 16
WORDS_PER_COUNTER = 4
RNG_ALGORITHM = f"Philox-4x64-10 (numpy {np.__version__}), key=seed, counter block per run"


@dataclass(frozen=True)
class McConfig:
    runs: int
    seed: int
    t_grid: Tuple[float, ...]

    def __post_init__(self):
        if isinstance(self.runs, bool) or not isinstance(self.runs, int) or self.runs < 1:
            raise ConfigError(f"runs must be a positive integer, got {self.runs!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        grid = tuple(float(t) for t in self.t_grid)
        if not grid or any(t < 0.0 or not math.isfinite(t) for t in grid):
            raise ConfigError("t_grid must be a non-empty list of non-negative times")
        if any(later <= earlier for earlier, later in zip(grid, grid[1:])):
            raise ConfigError("t_grid must be strictly ascending")
        object.__setattr__(self, "t_grid", grid)


@dataclass(frozen=True)
class McEstimate:
    label: str
    t_grid: Tuple[float, ...]
    estimates: Tuple[float, ...]
    half_widths: Tuple[float, ...]
    runs: int
    seed: int
    mean_failure_time: float
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def lower(self) -> Tuple[float, ...]:
        return tuple(max(0.0, r - h) for r, h in zip(self.estimates, self.half_widths))

    @property
    def upper(self) -> Tuple[float, ...]:
        return tuple(min(1.0, r + h) for r, h in zip(self.estimates, self.half_widths))

    def to_curve(self) -> ReliabilityCurve:
        return ReliabilityCurve(self.label, self.t_grid, self.estimates, Solver.MONTECARLO)


def _exponential(uniforms: np.ndarray, rate: float) -> np.ndarray:
    # inverse CDF, u in [0, 1)
    return -np.log1p(-uniforms) / rate


def _system_failure_times(spec: ArchitectureSpec, uniforms: np.ndarray) -> np.ndarray:
    """Rows of N_S + N_M uniforms -> time at which either layer drops below its threshold"""
    sensors = np.sort(_exponential(uniforms[:, : spec.n_sensors], spec.lambda_sensor), axis=1)
    mcus = np.sort(_exponential(uniforms[:, spec.n_sensors :], spec.lambda_mcu), axis=1)
    sensor_failure = sensors[:, spec.n_sensors - spec.s_required]
    mcu_failure = mcus[:, spec.n_mcus - spec.m_required]
    return np.minimum(sensor_failure, mcu_failure)


def run_uniforms(seed: int, start: int, stop: int, width: int) -> np.ndarray:
    """Uniforms in [0, 1) for runs start..stop-1, `width` per run"""
    counters = -(-width // WORDS_PER_COUNTER)
    bit_generator = np.random.Philox(key=seed, counter=start * counters)
    raw = bit_generator.random_raw((stop - start) * counters * WORDS_PER_COUNTER)
    raw = raw.reshape(stop - start, counters * WORDS_PER_COUNTER)[:, :width]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def simulate_failure_time(spec: ArchitectureSpec, rng: np.random.Generator) -> float:
    """
    One system failure time in hours.

    A k-out-of-N layer fails at the (N - k + 1)-th smallest component lifetime;
    the system fails with the first layer.
    """
    validate(spec)
    uniforms = rng.random(spec.n_sensors + spec.n_mcus)
    return float(_system_failure_times(spec, uniforms[np.newaxis, :])[0])


def _chunks(runs: int) -> List[Tuple[int, int]]:
    return [(start, min(start + CHUNK_RUNS, runs)) for start in range(0, runs, CHUNK_RUNS)]


def estimate_curve(spec: ArchitectureSpec, cfg: McConfig, workers: Optional[int] = None) -> McEstimate:
    """
    Fraction of runs still operating at each grid point, with 99% half-widths.

    Args:
        spec: architecture to simulate
        cfg: runs, seed and time grid
        workers: thread count for chunk evaluation; never changes the result
    """
    validate(spec)
    grid = np.asarray(cfg.t_grid)
    width = spec.n_sensors + spec.n_mcus

    def evaluate(chunk: Tuple[int, int]) -> Tuple[np.ndarray, float]:
        start, stop = chunk
        times = np.sort(_system_failure_times(spec, run_uniforms(cfg.seed, start, stop, width)))
        survivors = (stop - start) - np.searchsorted(times, grid, side="right")
        return survivors.astype(np.int64), math.fsum(times)

    chunks = _chunks(cfg.runs)
    logger.info("Simulating %s: %d runs in %d chunks, seed %d", spec.label, cfg.runs, len(chunks), cfg.seed)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, chunks))
    else:
        results = [evaluate(chunk) for chunk in chunks]

    survivors = np.sum([counts for counts, _ in results], axis=0)
    r_hat = survivors / cfg.runs
    half_widths = Z_99 * np.sqrt(r_hat * (1.0 - r_hat) / cfg.runs)

    return McEstimate(
        label=spec.label,
        t_grid=cfg.t_grid,
        estimates=tuple(float(r) for r in r_hat),
        half_widths=tuple(float(h) for h in half_widths),
        runs=cfg.runs,
        seed=cfg.seed,
        mean_failure_time=math.fsum(total for _, total in results) / cfg.runs,
    )
