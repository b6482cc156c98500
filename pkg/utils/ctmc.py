"""
Pure-death Markov chain of a sensor/MCU architecture.

State (m, s) counts operating MCUs and sensors. From (m, s) the chain moves to
(m-1, s) at rate m*lambda_M and to (m, s-1) at rate s*lambda_S; nothing ever
moves back. Transient probabilities are obtained by uniformization.

The 16-state chain for N_M = N_S = 3 is built in full with sensor rate
s*lambda_S. It does not reproduce the 12x12 matrix with a leading 2*lambda_S
entry that circulates with this model; the independent closed form and the
Monte Carlo estimator both agree with the full chain.
"""

import logging
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.sparse as sp
from scipy.special import gammaln, pdtrc, xlogy

from utils.architecture import ArchitectureSpec, validate
from utils.curve import ReliabilityCurve, Solver
from utils.exceptions import DegenerateGenerator, DomainError, InvalidProbabilityVector

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-12
MAX_EPS = 1e-6
SUM_TOLERANCE = 1e-12


class SystemState(NamedTuple):
    m: int  # operating MCUs
    s: int  # operating sensors

    def __str__(self) -> str:
        return f"{self.m},{self.s}"


@dataclass(frozen=True)
class StateSpace:
    """All (m, s) states, s descending in blocks and m descending inside each block"""

    states: Tuple[SystemState, ...]
    index: Mapping[SystemState, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[SystemState]:
        return iter(self.states)

    def __getitem__(self, position: int) -> SystemState:
        return self.states[position]

    def index_of(self, state: Tuple[int, int]) -> int:
        return self.index[SystemState(*state)]

    def up_set_mask(self, spec: ArchitectureSpec) -> np.ndarray:
        """Boolean mask of the operational states m >= M and s >= S"""
        return np.array(
            [state.m >= spec.m_required and state.s >= spec.s_required for state in self.states],
            dtype=bool,
        )


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Row-compressed transition-rate matrix, rates in 1/h"""

    matrix: sp.csr_matrix
    states: StateSpace

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def uniformization_rate(self) -> float:
        """Largest departure rate, i.e. max |diagonal|"""
        diagonal = self.matrix.diagonal()
        return float(np.max(-diagonal)) if diagonal.size else 0.0

    def off_diagonal_entries(self) -> List[Tuple[int, int, float]]:
        coo = self.matrix.tocoo()
        return sorted(
            (int(row), int(col), float(rate))
            for row, col, rate in zip(coo.row, coo.col, coo.data)
            if row != col
        )

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """State probabilities aligned to a StateSpace, at time t (hours)"""

    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidProbabilityVector("Probability vector must be a non-empty 1-D array")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise InvalidProbabilityVector("Probabilities must lie in [0, 1]")
        total = math.fsum(values)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidProbabilityVector(f"Probabilities sum to {total!r}, expected 1")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


def enumerate_states(spec: ArchitectureSpec) -> StateSpace:
    """(N_M+1)(N_S+1) states, first (N_M, N_S), last (0, 0)"""
    states = tuple(
        SystemState(m, s)
        for s in range(spec.n_sensors, -1, -1)
        for m in range(spec.n_mcus, -1, -1)
    )
    index = MappingProxyType({state: position for position, state in enumerate(states)})
    return StateSpace(states=states, index=index)


def build_generator(spec: ArchitectureSpec, states: StateSpace) -> GeneratorMatrix:
    """
    Assemble the generator for a pure-death chain.

    Each state has at most one MCU-failure and one sensor-failure transition,
    and the diagonal carries the negative departure rate. The absorbing state
    (0, 0) keeps an empty row.
    """
    validate(spec)
    rows, cols, rates = [], [], []

    for position, (m, s) in enumerate(states):
        departure = 0.0
        if m > 0:
            rate = m * spec.lambda_mcu
            rows.append(position)
            cols.append(states.index_of((m - 1, s)))
            rates.append(rate)
            departure += rate
        if s > 0:
            rate = s * spec.lambda_sensor
            rows.append(position)
            cols.append(states.index_of((m, s - 1)))
            rates.append(rate)
            departure += rate
        if departure > 0.0:
            rows.append(position)
            cols.append(position)
            rates.append(-departure)

    n = len(states)
    matrix = sp.csr_matrix((rates, (rows, cols)), shape=(n, n), dtype=float)
    matrix.sort_indices()

    logger.debug("Built %dx%d generator for %s with %d stored entries", n, n, spec.label, matrix.nnz)
    return GeneratorMatrix(matrix=matrix, states=states)


def initial_vector(states: StateSpace) -> ProbabilityVector:
    """All components operating at t = 0"""
    values = np.zeros(len(states))
    values[0] = 1.0
    return ProbabilityVector(values, 0.0)


def _check_request(gen: GeneratorMatrix, p0: ProbabilityVector, eps: float):
    if len(p0) != gen.dimension:
        raise InvalidProbabilityVector(
            f"Vector of length {len(p0)} does not match a {gen.dimension}-state generator"
        )
    if not 0.0 < eps <= MAX_EPS:
        raise DomainError(f"Truncation tolerance must lie in (0, {MAX_EPS}], got {eps!r}")


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"Time must be a finite non-negative number of hours, got {t!r}")
    return t


def _poisson_window(mu: float, eps: float) -> np.ndarray:
    """Poisson(mu) weights for k = 0..K, K the first index whose tail mass is below eps"""
    bound = int(mu + 12.0 * math.sqrt(mu) + 50.0)
    while True:
        ks = np.arange(bound + 1)
        below = np.flatnonzero(pdtrc(ks, mu) < eps)
        if below.size:
            break
        bound *= 2
    ks = ks[: below[0] + 1]
    return np.exp(xlogy(ks, mu) - mu - gammaln(ks + 1.0))


def _dtmc_powers(gen: GeneratorMatrix, p0: ProbabilityVector, rate: float, count: int) -> np.ndarray:
    """Rows v_k = (P^T)^k p0 for k < count, with P = I + Q / rate"""
    transposed = (sp.identity(gen.dimension, format="csr") + gen.matrix / rate).T.tocsr()
    powers = np.empty((count, gen.dimension))
    powers[0] = p0.values
    for k in range(1, count):
        powers[k] = transposed @ powers[k - 1]
    return powers


def _uniformization_rate(gen: GeneratorMatrix) -> float:
    rate = gen.uniformization_rate
    if rate == 0.0 and gen.dimension > 1:
        raise DegenerateGenerator(
            f"Generator over {gen.dimension} states has no transitions"
        )
    return rate


def _combine(weights: np.ndarray, powers: np.ndarray, t: float) -> ProbabilityVector:
    result = weights @ powers[: weights.size]
    np.clip(result, 0.0, None, out=result)
    return ProbabilityVector(result / result.sum(), t)


def solve_transient(
    gen: GeneratorMatrix, p0: ProbabilityVector, t: float, eps: float = DEFAULT_EPS
) -> ProbabilityVector:
    """
    Compute P(t) = exp(A^T t) P0 by uniformization.

    Args:
        gen: generator of the chain
        p0: initial distribution
        t: time in hours, t >= 0
        eps: bound on the truncated Poisson tail, in (0, 1e-6]

    Raises:
        DegenerateGenerator: the chain has several states but no transitions
    """
    _check_request(gen, p0, eps)
    t = _check_time(t)
    rate = _uniformization_rate(gen)
    if t == 0.0 or rate == 0.0:
        return ProbabilityVector(p0.values, t)

    weights = _poisson_window(rate * t, eps)
    powers = _dtmc_powers(gen, p0, rate, weights.size)
    return _combine(weights, powers, t)


def solve_transient_many(
    gen: GeneratorMatrix, p0: ProbabilityVector, times: Sequence[float], eps: float = DEFAULT_EPS
) -> List[ProbabilityVector]:
    """
    Solve every time point from t = 0 while sharing the DTMC powers.

    Each entry is identical to solve_transient(gen, p0, t, eps) for its t.
    """
    _check_request(gen, p0, eps)
    times = [_check_time(t) for t in times]
    if not times:
        return []
    rate = _uniformization_rate(gen)
    if rate == 0.0:
        return [ProbabilityVector(p0.values, t) for t in times]

    windows = [_poisson_window(rate * t, eps) if t > 0.0 else None for t in times]
    count = max((w.size for w in windows if w is not None), default=1)
    powers = _dtmc_powers(gen, p0, rate, count)

    return [
        ProbabilityVector(p0.values, t) if weights is None else _combine(weights, powers, t)
        for t, weights in zip(times, windows)
    ]


def solve_expm(gen: GeneratorMatrix, p0: ProbabilityVector, t: float) -> ProbabilityVector:
    """Dense matrix-exponential solution, used as a cross-check of uniformization"""
    if len(p0) != gen.dimension:
        raise InvalidProbabilityVector(
            f"Vector of length {len(p0)} does not match a {gen.dimension}-state generator"
        )
    t = _check_time(t)
    if t == 0.0:
        return ProbabilityVector(p0.values, t)
    result = scipy.linalg.expm(gen.to_dense().T * t) @ p0.values
    np.clip(result, 0.0, None, out=result)
    return ProbabilityVector(result / result.sum(), t)


def reliability_at(spec: ArchitectureSpec, states: StateSpace, p: ProbabilityVector) -> float:
    """Probability mass of the up-set {m >= M, s >= S}"""
    if len(p) != len(states):
        raise InvalidProbabilityVector(
            f"Vector of length {len(p)} does not match {len(states)} states"
        )
    value = math.fsum(p.values[states.up_set_mask(spec)])
    return min(1.0, max(0.0, value))


def check_time_grid(t_grid: Iterable[float]) -> Tuple[float, ...]:
    grid = tuple(float(t) for t in t_grid)
    if not grid:
        raise DomainError("Time grid is empty")
    for t in grid:
        _check_time(t)
    if any(later <= earlier for earlier, later in zip(grid, grid[1:])):
        raise DomainError("Time grid must be strictly ascending")
    return grid


def sample_curve(
    spec: ArchitectureSpec, t_grid: Sequence[float], eps: float = DEFAULT_EPS
) -> ReliabilityCurve:
    """R(t) at every grid point, each point solved from t = 0"""
    grid = check_time_grid(t_grid)
    states = enumerate_states(spec)
    gen = build_generator(spec, states)
    vectors = solve_transient_many(gen, initial_vector(states), grid, eps)
    curve = ReliabilityCurve(
        label=spec.label,
        t_grid=grid,
        values=tuple(reliability_at(spec, states, p) for p in vectors),
        solver=Solver.CTMC,
    )
    if not curve.is_nonincreasing():
        logger.warning("Curve for %s is not monotone within 1e-10", spec.label)
    return curve


def sample_curve_expm(spec: ArchitectureSpec, t_grid: Sequence[float]) -> ReliabilityCurve:
    grid = check_time_grid(t_grid)
    states = enumerate_states(spec)
    gen = build_generator(spec, states)
    p0 = initial_vector(states)
    return ReliabilityCurve(
        label=spec.label,
        t_grid=grid,
        values=tuple(reliability_at(spec, states, solve_expm(gen, p0, t)) for t in grid),
        solver=Solver.EXPM,
    )


def state_table(spec: ArchitectureSpec, t: float = 0.0, eps: float = DEFAULT_EPS) -> pd.DataFrame:
    """Per-state probabilities at time t with up-set membership"""
    states = enumerate_states(spec)
    gen = build_generator(spec, states)
    p = solve_transient(gen, initial_vector(states), t, eps)
    up = states.up_set_mask(spec)
    return pd.DataFrame(
        {
            "index": range(len(states)),
            "state": [str(state) for state in states],
            "m": [state.m for state in states],
            "s": [state.s for state in states],
            "up_set": up,
            "probability": p.values,
        }
    )


def _gvquote(text: str) -> str:
    return '"{}"'.format(text.replace('"', r"\""))


def _rate_label(multiplicity: int, layer: str) -> str:
    return f"λ{layer}" if multiplicity == 1 else f"{multiplicity}λ{layer}"


def _dot_lines(spec: ArchitectureSpec) -> Iterator[str]:
    states = enumerate_states(spec)
    up = states.up_set_mask(spec)

    yield "digraph {\n"
    yield f"  label={_gvquote(spec.label)};\n"
    yield "  rankdir=LR;\n"
    for state, operational in zip(states, up):
        peripheries = 2 if operational else 1
        yield f"  {_gvquote(str(state))} [shape=circle peripheries={peripheries}];\n"
    for m, s in states:
        if m > 0:
            yield "  {} -> {} [label={}];\n".format(
                _gvquote(f"{m},{s}"), _gvquote(f"{m - 1},{s}"), _gvquote(_rate_label(m, "M"))
            )
        if s > 0:
            yield "  {} -> {} [label={}];\n".format(
                _gvquote(f"{m},{s}"), _gvquote(f"{m},{s - 1}"), _gvquote(_rate_label(s, "S"))
            )
    yield "}\n"


def export_dot(spec: ArchitectureSpec) -> str:
    """Phase diagram in DOT; operational states get a double border"""
    validate(spec)
    return "".join(_dot_lines(spec))
