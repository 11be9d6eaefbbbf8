import numpy as np
import pytest

from phaseshift import (
    Grid,
    InsufficientFValues,
    OrderOutOfRange,
    PhaseSeries,
    PotentialSpec,
    TruncationTooHigh,
    analytic_free_reference,
    assemble_delta_n,
    assemble_series,
    divergence_flag,
    evaluate_truncated,
    log_expansion_reference,
)

from _oracles import BARRIER_TAYLOR


def random_f(rng, count=10):
    return [complex(a, b) for a, b in rng.uniform(-1.0, 1.0, size=(count, 2))]


def test_low_order_closed_forms():
    rng = np.random.default_rng(2)
    for _ in range(25):
        f = random_f(rng, 3)
        f1, f2, f3 = f
        assert assemble_delta_n(f, 1) == f1.imag
        assert abs(assemble_delta_n(f, 2) - (f2 - 0.5 * f1 ** 2).imag) < 1e-14
        expected3 = (f3 - f1 * f2 + f1 ** 3 / 3.0).imag
        assert abs(assemble_delta_n(f, 3) - expected3) < 1e-14
        # the recurrence path reproduces the same closed forms
        assert log_expansion_reference(f, 1) == f1.imag
        assert abs(log_expansion_reference(f, 2) - (f2 - 0.5 * f1 ** 2).imag) < 1e-14


def test_partition_sum_equals_log_recurrence():
    rng = np.random.default_rng(17)
    for _ in range(50):
        f = random_f(rng)
        for n in range(1, 11):
            a = assemble_delta_n(f, n)
            b = log_expansion_reference(f, n)
            assert abs(a - b) < 1e-12


def test_zero_values_give_zero_correction():
    f = [0j] * 6
    for n in range(1, 7):
        assert assemble_delta_n(f, n) == 0.0


def test_order_validation():
    f = [1.0 + 0.5j]
    with pytest.raises(OrderOutOfRange):
        assemble_delta_n(f, 0)
    with pytest.raises(OrderOutOfRange):
        assemble_delta_n([1j] * 25, 21)
    with pytest.raises(InsufficientFValues):
        assemble_delta_n(f, 2)
    with pytest.raises(InsufficientFValues):
        log_expansion_reference(f, 3)


def test_barrier_series_matches_exact_taylor_coefficients(barrier_series):
    # exact coefficients of the closed-form barrier phase, high-precision
    for n in range(4):
        assert abs(barrier_series.corrections[n] - BARRIER_TAYLOR[n]) < 1e-8
    assert barrier_series.delta0 == 0.0
    assert barrier_series.max_order == 4


def test_zero_perturbation_series():
    ref = analytic_free_reference(1.0, Grid(2.0, 201))
    series = assemble_series(ref, PotentialSpec.zero(), 4)
    assert series.corrections == (0.0, 0.0, 0.0, 0.0)
    assert evaluate_truncated(series, 0.7, 4) == series.delta0
    assert divergence_flag(series, 1.0) is False


def test_scaling_covariance():
    # f_n is n-linear in the potential, so delta_n picks up c**n
    ref = analytic_free_reference(1.0, Grid(2.0, 2001))
    base = assemble_series(
        ref, PotentialSpec.piecewise_constant([(0.0, 1.0, 1.0)]), 4)
    scaled = assemble_series(
        ref, PotentialSpec.piecewise_constant([(0.0, 1.0, 1.7)]), 4)
    for n in range(1, 5):
        want = 1.7 ** n * base.corrections[n - 1]
        assert abs(scaled.corrections[n - 1] - want) <= 1e-10 * max(1.0, abs(want))


def test_evaluate_truncated_partial_sums(barrier_series):
    d = barrier_series
    assert evaluate_truncated(d, 0.3, 0) == d.delta0
    assert evaluate_truncated(d, 0.0, 4) == d.delta0
    expected = d.delta0
    for n in range(1, 5):
        expected += 0.3 ** n * d.corrections[n - 1]
        assert abs(evaluate_truncated(d, 0.3, n) - expected) < 1e-15
    with pytest.raises(TruncationTooHigh):
        evaluate_truncated(d, 0.3, 5)
    with pytest.raises(OrderOutOfRange):
        evaluate_truncated(d, 0.3, -1)


def test_assemble_series_order_validation(fine_free_ref, barrier):
    with pytest.raises(OrderOutOfRange):
        assemble_series(fine_free_ref, barrier, 0)
    with pytest.raises(OrderOutOfRange):
        assemble_series(fine_free_ref, barrier, 21)


def synthetic_series(corrections):
    order = len(corrections)
    return PhaseSeries(k=1.0, grid=Grid(1.0, 3), delta0=0.1,
                       corrections=tuple(corrections),
                       values_at_zero=(0j,) * order, max_order=order)


def test_divergence_flag_heuristic():
    growing = synthetic_series([0.5, 0.6, 0.7])
    assert divergence_flag(growing, 1.0) is True
    # the same series is convergent when evaluated at a small coupling
    assert divergence_flag(growing, 0.1) is False

    shrinking = synthetic_series([1.0, 0.5, 0.2])
    assert divergence_flag(shrinking, 1.0) is False

    # fewer than three orders: no evidence, never flags
    short = synthetic_series([2.0, 3.0])
    assert divergence_flag(short, 1.0) is False

    # flat zeros do not flag (the "non-decreasing" tail is all zero)
    flat = synthetic_series([0.0, 0.0, 0.0])
    assert divergence_flag(flat, 1.0) is False

    # only the last three orders matter
    late_growth = synthetic_series([5.0, 0.1, 0.2, 0.3])
    assert divergence_flag(late_growth, 1.0) is True


def test_series_container_validation():
    with pytest.raises(ValueError):
        PhaseSeries(k=1.0, grid=Grid(1.0, 3), delta0=0.0,
                    corrections=(0.1, 0.2), values_at_zero=(0j, 0j),
                    max_order=3)
    with pytest.raises(ValueError):
        PhaseSeries(k=1.0, grid=Grid(1.0, 3), delta0=0.0,
                    corrections=(0.1, float("nan")), values_at_zero=(0j, 0j),
                    max_order=2)
