"""
Comparison study over families of sensor/MCU architectures.

Enumerates SooN_S/MooN_M candidates, ranks them by survival probability,
locates where each curve crosses the 1oo1/1oo1 reference and folds
everything into a ComparisonReport.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from utils.analytic import analytic_curve, analytic_reliability, mttf
from utils.architecture import (
    ArchitectureSpec,
    SelfDiagnosis,
    classify_self_diagnosis,
    is_reference,
    validate,
)
from utils.ctmc import (
    DEFAULT_EPS,
    build_generator,
    check_time_grid,
    enumerate_states,
    initial_vector,
    reliability_at,
    sample_curve,
    sample_curve_expm,
    solve_expm,
    solve_transient,
    solve_transient_many,
)
from utils.curve import ReliabilityCurve, Solver, format_number

logger = logging.getLogger(__name__)

SCAN_STEPS = 1000
BISECTION_XTOL = 1e-6  # hours; keeps |a(t*) - b(t*)| well under 1e-9 at these rates

CurveFunction = Callable[[float], float]


class ReliabilityFunction:
    """R(t) of one architecture through a chosen solver"""

    def __init__(self, spec: ArchitectureSpec, solver: Union[Solver, str] = Solver.CTMC, eps: float = DEFAULT_EPS):
        self.spec = validate(spec)
        self.solver = Solver(solver)
        if self.solver is Solver.MONTECARLO:
            raise ValueError("Monte Carlo estimates are not a deterministic reliability function")
        self.eps = eps
        self.states = enumerate_states(spec)
        self.generator = build_generator(spec, self.states)
        self.p0 = initial_vector(self.states)

    def __call__(self, t: float) -> float:
        if self.solver is Solver.ANALYTIC:
            return analytic_reliability(self.spec, t)
        if self.solver is Solver.EXPM:
            return reliability_at(self.spec, self.states, solve_expm(self.generator, self.p0, t))
        return reliability_at(self.spec, self.states, solve_transient(self.generator, self.p0, t, self.eps))

    def many(self, times: Sequence[float]) -> np.ndarray:
        if self.solver is Solver.CTMC:
            vectors = solve_transient_many(self.generator, self.p0, times, self.eps)
            return np.array([reliability_at(self.spec, self.states, p) for p in vectors])
        return np.array([self(t) for t in times])

    def curve(self, t_grid: Sequence[float]) -> ReliabilityCurve:
        return curve_for(self.spec, t_grid, self.solver, self.eps)


def curve_for(
    spec: ArchitectureSpec,
    t_grid: Sequence[float],
    solver: Union[Solver, str] = Solver.CTMC,
    eps: float = DEFAULT_EPS,
) -> ReliabilityCurve:
    """Sample R(t) on the grid with the requested solver"""
    solver = Solver(solver)
    if solver is Solver.CTMC:
        return sample_curve(spec, t_grid, eps)
    if solver is Solver.EXPM:
        return sample_curve_expm(spec, t_grid)
    if solver is Solver.ANALYTIC:
        return analytic_curve(spec, check_time_grid(t_grid))
    raise ValueError(f"No deterministic curve for solver {solver}")


def enumerate_architectures(
    max_sensors: int, max_mcus: int, lambda_sensor: float, lambda_mcu: float
) -> List[ArchitectureSpec]:
    """Every SooN_S/MooN_M with N_S <= max_sensors and N_M <= max_mcus, ordered by (N_S, S, N_M, M)"""
    if max_sensors < 1 or max_mcus < 1:
        raise ValueError(f"Enumeration bounds must be at least 1, got {max_sensors}/{max_mcus}")
    return [
        validate(ArchitectureSpec(n_sensors, s_required, n_mcus, m_required, lambda_sensor, lambda_mcu))
        for n_sensors in range(1, max_sensors + 1)
        for s_required in range(1, n_sensors + 1)
        for n_mcus in range(1, max_mcus + 1)
        for m_required in range(1, n_mcus + 1)
    ]


def select_family(
    specs: Sequence[ArchitectureSpec], n_sensors: Optional[int] = None, n_mcus: Optional[int] = None
) -> List[ArchitectureSpec]:
    """Keep the architectures with exactly these component counts; None keeps every count"""
    return [
        spec for spec in specs
        if (n_sensors is None or spec.n_sensors == n_sensors)
        and (n_mcus is None or spec.n_mcus == n_mcus)
    ]


def _sample(function: CurveFunction, times: np.ndarray) -> np.ndarray:
    many = getattr(function, "many", None)
    if many is not None:
        return np.asarray(many(times), dtype=float)
    return np.array([function(t) for t in times], dtype=float)


def crossing_time(
    curve_fn_a: CurveFunction,
    curve_fn_b: CurveFunction,
    t_max: float,
    scan_steps: int = SCAN_STEPS,
    xtol: float = BISECTION_XTOL,
) -> Optional[float]:
    """
    First time in (0, t_max] at which a - b strictly changes sign.

    The interval is scanned in steps of t_max / scan_steps and the first
    bracket is refined by bisection. Points where a == b never count as a
    sign change, so curves that only touch report None.
    """
    times = np.linspace(0.0, t_max, scan_steps + 1)[1:]
    differences = _sample(curve_fn_a, times) - _sample(curve_fn_b, times)
    signs = np.sign(differences)

    previous_sign = 0.0
    last_time = 0.0
    for t, sign in zip(times, signs):
        if sign == 0.0:
            continue
        if previous_sign != 0.0 and sign != previous_sign:
            crossing = bisect(lambda x: curve_fn_a(x) - curve_fn_b(x), last_time, float(t), xtol=xtol)
            logger.debug("Sign change in [%g, %g], crossing at %r h", last_time, t, crossing)
            return float(crossing)
        previous_sign = sign
        last_time = float(t)
    return None


@dataclass(frozen=True)
class RankedRow:
    label: str
    reliability: float
    rank: int


def rank_at(
    specs: Sequence[ArchitectureSpec],
    t: float,
    solver: Union[Solver, str] = Solver.CTMC,
    eps: float = DEFAULT_EPS,
) -> List[RankedRow]:
    """Rows by descending R(t); equal values fall back to label order"""
    values = [(spec.label, ReliabilityFunction(spec, solver, eps)(t)) for spec in specs]
    ordered = sorted(values, key=lambda item: (-item[1], item[0]))
    return [RankedRow(label, value, rank) for rank, (label, value) in enumerate(ordered, start=1)]


@dataclass(frozen=True)
class ReportRow:
    spec: ArchitectureSpec
    diagnosis: SelfDiagnosis
    reference: bool
    mttf_hours: float
    reliability: Dict[float, float]
    delta_vs_reference: Dict[float, float]
    crossing_vs_ref_hours: Optional[float]
    ranks: Dict[float, int]

    @property
    def label(self) -> str:
        return self.spec.label


@dataclass(frozen=True)
class ComparisonReport:
    reference: ArchitectureSpec
    horizons: Tuple[float, ...]
    solver: Solver
    rows: Tuple[ReportRow, ...]
    curves: Tuple[ReliabilityCurve, ...] = field(repr=False)
    reference_curve: Optional[ReliabilityCurve] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, label: str) -> ReportRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)

    def suitable_labels(self) -> List[str]:
        return [row.label for row in self.rows if row.diagnosis.suitable]

    def columns(self) -> List[str]:
        suffixes = [format_number(horizon) for horizon in self.horizons]
        return (
            ["label", "sensor_class", "mcu_class", "suitable", "mttf_hours"]
            + [f"r_at_{suffix}" for suffix in suffixes]
            + ["crossing_vs_ref_hours"]
            + [f"rank_at_{suffix}" for suffix in suffixes]
            + [f"delta_r_vs_ref_at_{suffix}" for suffix in suffixes]
            + ["reference"]
        )

    def to_frame(self) -> pd.DataFrame:
        """Typed table, one row per architecture in enumeration order"""
        records = []
        for row in self.rows:
            record = {
                "label": row.label,
                "sensor_class": row.diagnosis.sensor_layer.value,
                "mcu_class": row.diagnosis.mcu_layer.value,
                "suitable": row.diagnosis.suitable,
                "mttf_hours": row.mttf_hours,
            }
            for horizon in self.horizons:
                record[f"r_at_{format_number(horizon)}"] = row.reliability[horizon]
            record["crossing_vs_ref_hours"] = row.crossing_vs_ref_hours
            for horizon in self.horizons:
                record[f"rank_at_{format_number(horizon)}"] = row.ranks[horizon]
            for horizon in self.horizons:
                record[f"delta_r_vs_ref_at_{format_number(horizon)}"] = row.delta_vs_reference[horizon]
            record["reference"] = row.reference
            records.append(record)
        return pd.DataFrame.from_records(records, columns=self.columns())


def build_report(
    specs: Sequence[ArchitectureSpec],
    t_grid: Sequence[float],
    reference: ArchitectureSpec,
    horizons: Optional[Sequence[float]] = None,
    solver: Union[Solver, str] = Solver.CTMC,
    eps: float = DEFAULT_EPS,
    workers: Optional[int] = None,
) -> ComparisonReport:
    """
    Per-architecture metrics against a reference architecture.

    MTTF always comes from the closed form. R values, ranks and crossings
    use the requested solver. The crossing search covers (0, t_grid[-1]].
    With workers > 1 architectures are evaluated on a thread pool; rows keep
    the order of `specs` either way.
    """
    solver = Solver(solver)
    grid = check_time_grid(t_grid)
    horizons = tuple(float(h) for h in (horizons if horizons else (grid[-1],)))
    t_max = grid[-1]

    reference_fn = ReliabilityFunction(reference, solver, eps)
    reference_at = dict(zip(horizons, reference_fn.many(horizons)))
    reference_curve = reference_fn.curve(grid)

    def evaluate(spec: ArchitectureSpec):
        function = ReliabilityFunction(spec, solver, eps)
        at = dict(zip(horizons, (float(r) for r in function.many(horizons))))
        crossing = crossing_time(function, reference_fn, t_max)
        logger.debug("Evaluated %s: crossing %s", spec.label, crossing)
        return spec, at, crossing, function.curve(grid)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evaluated = list(pool.map(evaluate, specs))
    else:
        evaluated = [evaluate(spec) for spec in specs]

    ranks: Dict[float, Dict[str, int]] = {}
    for horizon in horizons:
        ordered = sorted(evaluated, key=lambda item: (-item[1][horizon], item[0].label))
        ranks[horizon] = {item[0].label: rank for rank, item in enumerate(ordered, start=1)}

    rows = tuple(
        ReportRow(
            spec=spec,
            diagnosis=classify_self_diagnosis(spec),
            reference=is_reference(spec),
            mttf_hours=mttf(spec),
            reliability=at,
            delta_vs_reference={h: at[h] - float(reference_at[h]) for h in horizons},
            crossing_vs_ref_hours=crossing,
            ranks={h: ranks[h][spec.label] for h in horizons},
        )
        for spec, at, crossing, _ in evaluated
    )
    logger.info("Built report over %d architectures against %s", len(rows), reference.label)
    return ComparisonReport(
        reference=reference,
        horizons=horizons,
        solver=solver,
        rows=rows,
        curves=tuple(curve for _, _, _, curve in evaluated),
        reference_curve=reference_curve,
    )
