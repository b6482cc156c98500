import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad, trapezoid

from utils.analytic import (
    analytic_reliability,
    koon_reliability,
    layer_mttf,
    layer_polynomial,
    mttf,
)
from utils.ctmc import sample_curve
from utils.exceptions import DomainError


def brute_force(n, k, p):
    return sum(
        p ** sum(alive) * (1 - p) ** (n - sum(alive))
        for alive in itertools.product((0, 1), repeat=n)
        if sum(alive) >= k
    )


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_koon_single_component(p):
    assert koon_reliability(1, 1, p) == p


def test_koon_two_of_three():
    assert koon_reliability(3, 2, 0.9) == pytest.approx(0.972, abs=1e-15)


def test_koon_two_of_four():
    assert koon_reliability(4, 2, 0.5) == pytest.approx(11 / 16, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_koon_matches_enumeration(n):
    for k in range(1, n + 1):
        for p in (0.01, 0.37, 0.5, 0.93):
            assert koon_reliability(n, k, p) == pytest.approx(brute_force(n, k, p), abs=1e-14)


def test_koon_monotone():
    grid = np.linspace(0.0, 1.0, 101)
    for n in range(1, 6):
        for k in range(1, n + 1):
            values = [koon_reliability(n, k, p) for p in grid]
            assert all(b >= a - 1e-15 for a, b in zip(values, values[1:]))
            if k < n:
                assert all(
                    koon_reliability(n, k, p) >= koon_reliability(n, k + 1, p) - 1e-15 for p in grid
                )


@pytest.mark.parametrize("n,k,p", [(3, 0, 0.5), (3, 4, 0.5), (3, 2, 1.2), (3, 2, -0.1), (2.0, 1, 0.5)])
def test_koon_domain(n, k, p):
    with pytest.raises(DomainError):
        koon_reliability(n, k, p)


def test_layer_polynomial():
    assert layer_polynomial(1, 1) == {1: 1}
    assert layer_polynomial(3, 2) == {2: 3, 3: -2}
    assert layer_polynomial(4, 2) == {2: 6, 3: -8, 4: 3}
    assert layer_polynomial(3, 1) == {1: 3, 2: -3, 3: 1}


def test_analytic_reference(arch):
    assert analytic_reliability(arch("1oo1/1oo1"), 10000.0) == pytest.approx(math.exp(-1.1), rel=1e-14)


def test_analytic_at_zero(all_architectures):
    assert all(analytic_reliability(spec, 0.0) == 1.0 for spec in all_architectures)


def test_analytic_two_of_three_two_of_four(arch):
    p_s, p_m = math.exp(-0.1), math.exp(-1.0)
    expected = (3 * p_s ** 2 - 2 * p_s ** 3) * koon_reliability(4, 2, p_m)
    assert analytic_reliability(arch("2oo3/2oo4"), 10000.0) == pytest.approx(expected, rel=1e-14)


def test_analytic_rejects_negative_time(arch):
    with pytest.raises(DomainError):
        analytic_reliability(arch("2oo3/2oo3"), -1.0)


def test_mttf_reference(arch):
    assert mttf(arch("1oo1/1oo1")) == pytest.approx(1 / 1.1e-4, rel=1e-12)


def test_layer_mttf_one_of_two():
    assert layer_mttf(2, 1, 1e-5) == pytest.approx(3 / (2 * 1e-5), rel=1e-12)


def test_mttf_containment(arch):
    assert mttf(arch("2oo3/1oo1")) < mttf(arch("1oo3/1oo1"))
    assert layer_mttf(3, 2, 1e-4) < layer_mttf(3, 1, 1e-4)


@pytest.mark.parametrize("label", ["1oo1/1oo1", "2oo3/2oo3", "2oo3/2oo4", "1oo3/1oo2", "3oo3/3oo4"])
def test_mttf_matches_quadrature(arch, label):
    spec = arch(label)
    numeric, _ = quad(
        lambda t: analytic_reliability(spec, t), 0.0, 4e5,
        points=[1e4, 3e4, 1e5], epsabs=1e-12, epsrel=1e-10, limit=500,
    )
    assert mttf(spec) == pytest.approx(numeric, rel=1e-6)


def test_mttf_matches_trapezoid_of_ctmc_curve(arch):
    spec = arch("2oo3/2oo3")
    grid = np.linspace(0.0, 250000.0, 5001)
    curve = sample_curve(spec, grid)
    assert curve.values[-1] < 1e-9
    assert mttf(spec) == pytest.approx(trapezoid(curve.values, grid), rel=1e-4)
