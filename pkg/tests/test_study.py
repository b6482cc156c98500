"""End-to-end checks on the S3M3 and S3M4 studies at the default failure rates"""

import math

import numpy as np
import pytest

from utils.analysis import ReliabilityFunction, build_report, crossing_time
from utils.analytic import analytic_curve, analytic_reliability, koon_reliability, mttf
from utils.architecture import classify_self_diagnosis, reference_architecture
from utils.ctmc import sample_curve
from utils.curve import Solver
from utils.montecarlo import McConfig, estimate_curve

FIGURE_GRID = [float(t) for t in np.linspace(0.0, 30000.0, 301)]


def test_ctmc_matches_closed_form_everywhere(all_architectures, study_grid):
    for spec in all_architectures:
        ctmc = sample_curve(spec, study_grid)
        exact = analytic_curve(spec, study_grid)
        worst = max(abs(a - b) for a, b in zip(ctmc.values, exact.values))
        assert worst <= 1e-9, spec.label


def test_reference_survival(arch, reference_value):
    curve = sample_curve(arch("1oo1/1oo1"), FIGURE_GRID)
    assert curve.values == pytest.approx([reference_value(t) for t in FIGURE_GRID], abs=1e-11)


def test_two_of_three_at_ten_thousand_hours(arch):
    p_s, p_m = math.exp(-0.1), math.exp(-1.0)
    expected = (3 * p_s ** 2 - 2 * p_s ** 3) * (3 * p_m ** 2 - 2 * p_m ** 3)
    assert sample_curve(arch("2oo3/2oo3"), [10000.0]).values[0] == pytest.approx(expected, abs=1e-9)


def test_reference_mttf(arch):
    assert mttf(arch("1oo1/1oo1")) == pytest.approx(9090.909090909, abs=1e-6)


def _above(upper, lower):
    return all(a >= b - 1e-12 for a, b in zip(upper.values, lower.values))


def test_s3m3_figure_ordering(arch):
    curves = {
        label: analytic_curve(arch(label), FIGURE_GRID)
        for label in ("1oo3/1oo3", "2oo3/1oo3", "2oo3/2oo3", "2oo3/3oo3", "3oo3/3oo3")
    }
    assert _above(curves["1oo3/1oo3"], curves["2oo3/1oo3"])
    assert _above(curves["2oo3/1oo3"], curves["2oo3/2oo3"])
    assert _above(curves["2oo3/2oo3"], curves["2oo3/3oo3"])
    assert _above(curves["2oo3/3oo3"], curves["3oo3/3oo3"])


def test_s3m3_extremes_at_every_grid_point(s3m3_family):
    curves = {spec.label: analytic_curve(spec, FIGURE_GRID).values for spec in s3m3_family}
    for i, t in enumerate(FIGURE_GRID[1:], start=1):
        ordered = sorted(curves, key=lambda label: (-curves[label][i], label))
        assert set(ordered[:2]) == {"1oo3/1oo3", "2oo3/1oo3"}, t
        assert set(ordered[-2:]) == {"3oo3/3oo3", "2oo3/3oo3"}, t


def test_s3m4_figure_ordering(arch):
    two_of_four = analytic_curve(arch("2oo3/2oo4"), FIGURE_GRID)
    two_of_three = analytic_curve(arch("2oo3/2oo3"), FIGURE_GRID)
    assert _above(two_of_four, two_of_three)
    assert two_of_four.values[-1] > two_of_three.values[-1]


def test_two_of_four_beats_two_of_three_layer():
    for p in np.linspace(0.0, 1.0, 1001)[1:-1]:
        assert koon_reliability(4, 2, p) > koon_reliability(3, 2, p)


def test_majority_architectures_cross_the_reference(arch):
    reference = ReliabilityFunction(arch("1oo1/1oo1"), Solver.ANALYTIC)
    s3m3 = crossing_time(ReliabilityFunction(arch("2oo3/2oo3"), Solver.ANALYTIC), reference, 30000.0)
    s3m4 = crossing_time(ReliabilityFunction(arch("2oo3/2oo4"), Solver.ANALYTIC), reference, 30000.0)
    # redundant layers start above the reference and end below it
    assert 5000.0 < s3m3 < 12000.0
    assert 12000.0 < s3m4 < 25000.0


def test_s3m3_study_selects_two_of_three(s3m3_family, rates):
    report = build_report(s3m3_family, FIGURE_GRID[::10], reference_architecture(*rates), solver=Solver.ANALYTIC)
    majority_on_both = [
        row.label for row in report.rows
        if row.diagnosis.suitable and row.diagnosis.sensor_layer == row.diagnosis.mcu_layer
    ]
    assert majority_on_both == ["2oo3/2oo3"]


def test_s3m4_study_keeps_two_of_four(s3m4_family):
    suitable = [spec.label for spec in s3m4_family if classify_self_diagnosis(spec).suitable]
    assert "2oo3/2oo4" in suitable
    assert "3oo3/2oo4" not in suitable


def test_up_set_containment(arch):
    for t in (5000.0, 15000.0, 30000.0):
        assert analytic_reliability(arch("1oo3/2oo4"), t) >= analytic_reliability(arch("2oo3/2oo4"), t)
        assert analytic_reliability(arch("2oo3/2oo4"), t) >= analytic_reliability(arch("2oo3/3oo4"), t)
        assert analytic_reliability(arch("2oo3/3oo4"), t) >= analytic_reliability(arch("3oo3/3oo4"), t)


def test_monte_carlo_reference_at_ten_thousand_hours(arch):
    runs = 100_000
    estimate = estimate_curve(arch("1oo1/1oo1"), McConfig(runs=runs, seed=20240601, t_grid=(10000.0,)))
    r = math.exp(-1.1)
    assert abs(estimate.estimates[0] - r) <= 4 * math.sqrt(r * (1 - r) / runs)


CONCORDANCE_GRID = (0.0, 5000.0, 10000.0, 20000.0, 30000.0)
CONCORDANCE_SEEDS = range(20)


def _concordance(specs, runs):
    checks = passed = 0
    for spec in specs:
        exact = [analytic_reliability(spec, t) for t in CONCORDANCE_GRID]
        for seed in CONCORDANCE_SEEDS:
            estimate = estimate_curve(spec, McConfig(runs=runs, seed=seed, t_grid=CONCORDANCE_GRID))
            for r, r_hat in zip(exact, estimate.estimates):
                checks += 1
                passed += abs(r_hat - r) <= 4 * math.sqrt(r * (1 - r) / runs) + 1e-12
    return passed, checks


def test_monte_carlo_concordance_all_architectures(all_architectures):
    passed, checks = _concordance(all_architectures, runs=2000)
    assert checks == 60 * 20 * len(CONCORDANCE_GRID)
    assert passed >= 0.99 * checks


@pytest.mark.slow
def test_monte_carlo_concordance_all_architectures_large(all_architectures):
    passed, checks = _concordance(all_architectures, runs=100_000)
    assert passed >= 0.99 * checks


@pytest.mark.slow
def test_monte_carlo_concordance_over_seeds(arch):
    spec = arch("2oo3/2oo3")
    grid = (0.0, 2500.0, 5000.0, 10000.0, 15000.0, 20000.0, 30000.0)
    runs = 1_000_000
    checks = passed = 0
    for seed in range(20):
        estimate = estimate_curve(spec, McConfig(runs=runs, seed=seed, t_grid=grid))
        for t, r_hat in zip(grid, estimate.estimates):
            r = analytic_reliability(spec, t)
            checks += 1
            passed += abs(r_hat - r) <= 4 * math.sqrt(r * (1 - r) / runs) + 1e-12
    assert passed >= 0.99 * checks
