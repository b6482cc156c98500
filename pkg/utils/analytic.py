"""
Closed-form reliability of independent k-out-of-n layers.

With i.i.d. exponential lifetimes and no repair, the sensor and MCU layers
fail independently, so R(t) is the product of two binomial tails. Expanding
the tails in p = exp(-lambda t) turns R(t) into a finite sum of exponentials,
which integrates exactly to the MTTF.
"""

import math
from fractions import Fraction
from typing import Dict, Sequence

from utils.architecture import ArchitectureSpec, validate
from utils.curve import ReliabilityCurve, Solver
from utils.exceptions import DomainError


def _check_layer(n: int, k: int):
    if isinstance(n, bool) or isinstance(k, bool) or not isinstance(n, int) or not isinstance(k, int):
        raise DomainError(f"n and k must be integers, got n={n!r}, k={k!r}")
    if not 1 <= k <= n:
        raise DomainError(f"Need 1 <= k <= n, got k={k}, n={n}")


def koon_reliability(n: int, k: int, p: float) -> float:
    """
    Probability that at least k of n i.i.d. components survive.

    The shorter of the two binomial tails is summed.

    Raises:
        DomainError: k outside [1, n] or p outside [0, 1]
    """
    _check_layer(n, k)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Survival probability must lie in [0, 1], got {p!r}")
    q = 1.0 - p

    def term(i: int) -> float:
        return math.comb(n, i) * p ** i * q ** (n - i)

    if n - k + 1 <= k:
        value = math.fsum(term(i) for i in range(k, n + 1))
    else:
        value = 1.0 - math.fsum(term(i) for i in range(0, k))
    return min(1.0, max(0.0, value))


def layer_polynomial(n: int, k: int) -> Dict[int, int]:
    """Integer coefficients c_r of the k-out-of-n survival polynomial sum c_r p^r"""
    _check_layer(n, k)
    coefficients: Dict[int, int] = {}
    for i in range(k, n + 1):
        for j in range(n - i + 1):
            power = i + j
            coefficients[power] = coefficients.get(power, 0) + (
                math.comb(n, i) * math.comb(n - i, j) * (-1) ** j
            )
    return {power: c for power, c in sorted(coefficients.items()) if c != 0}


def analytic_reliability(spec: ArchitectureSpec, t: float) -> float:
    """R(t) as the product of the sensor-layer and MCU-layer binomial tails"""
    validate(spec)
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"Time must be a finite non-negative number of hours, got {t!r}")
    p_sensor = math.exp(-spec.lambda_sensor * t)
    p_mcu = math.exp(-spec.lambda_mcu * t)
    return koon_reliability(spec.n_sensors, spec.s_required, p_sensor) * koon_reliability(
        spec.n_mcus, spec.m_required, p_mcu
    )


def analytic_curve(spec: ArchitectureSpec, t_grid: Sequence[float]) -> ReliabilityCurve:
    grid = tuple(float(t) for t in t_grid)
    return ReliabilityCurve(
        label=spec.label,
        t_grid=grid,
        values=tuple(analytic_reliability(spec, t) for t in grid),
        solver=Solver.ANALYTIC,
    )


def mttf(spec: ArchitectureSpec) -> float:
    """
    Mean time to failure in hours.

    R(t) = sum c_ij exp(-(i lambda_S + j lambda_M) t), so the integral is
    sum c_ij / (i lambda_S + j lambda_M), accumulated in exact rationals.
    """
    validate(spec)
    lambda_sensor = Fraction(spec.lambda_sensor)
    lambda_mcu = Fraction(spec.lambda_mcu)
    sensor_terms = layer_polynomial(spec.n_sensors, spec.s_required)
    mcu_terms = layer_polynomial(spec.n_mcus, spec.m_required)

    total = sum(
        (
            Fraction(c_sensor * c_mcu) / (i * lambda_sensor + j * lambda_mcu)
            for i, c_sensor in sensor_terms.items()
            for j, c_mcu in mcu_terms.items()
        ),
        Fraction(0),
    )
    return float(total)


def layer_mttf(n: int, k: int, rate: float) -> float:
    """MTTF of a single k-out-of-n layer with per-component failure rate"""
    rate = float(rate)
    if not math.isfinite(rate) or rate <= 0.0:
        raise DomainError(f"Failure rate must be positive, got {rate!r}")
    exact_rate = Fraction(rate)
    total = sum(
        (Fraction(c) / (r * exact_rate) for r, c in layer_polynomial(n, k).items()),
        Fraction(0),
    )
    return float(total)
