import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.stats import kstest

from bipartite_chunglu.exceptions import DomainError, ParameterError
from bipartite_chunglu.weights import (
    PowerLawParams,
    Side,
    WeightSequence,
    cap,
    check_assumptions,
    constant,
    moments,
    read_weights,
    sample_power_law,
    write_weights,
)


def test_params_validation():
    with pytest.raises(ParameterError):
        PowerLawParams(1.0)
    with pytest.raises(ParameterError):
        PowerLawParams(0.5, w_max=math.inf)
    with pytest.raises(ParameterError):
        PowerLawParams(2.5, w_min=0.5)
    with pytest.raises(ParameterError):
        PowerLawParams(2.5, w_min=5, w_max=2)
    with pytest.raises(ParameterError):
        PowerLawParams(2.5, w_min=1.2, w_max=1.8, discrete=True)


def test_degenerate_support():
    s = sample_power_law(PowerLawParams(3, 1, 1, discrete=True), 5, seed=0)
    assert s.values.tolist() == [1, 1, 1, 1, 1]


def test_sample_n_must_be_positive():
    with pytest.raises(ParameterError):
        sample_power_law(PowerLawParams(3), 0)


def test_continuous_truncated_mean_matches_integral():
    p = PowerLawParams(2.5, 1, 1000)
    s = sample_power_law(p, 10**6, seed=3)
    num = integrate.quad(lambda w: w ** -1.5, 1, 1000)[0]
    den = integrate.quad(lambda w: w ** -2.5, 1, 1000)[0]
    assert abs(num / den - p.mean()) < 1e-9
    assert abs(s.values.mean() / p.mean() - 1) < 0.01


def test_truncation_and_cdf_ks():
    p = PowerLawParams(2.5, 1, 1000)
    s = sample_power_law(p, 10**6, seed=4)
    assert s.values.min() >= 1 and s.values.max() <= 1000
    assert kstest(s.values, p.cdf).statistic < 0.01


@pytest.mark.parametrize("params", [PowerLawParams(2.5, 1, 63, True), PowerLawParams(3.0, 1, math.inf, True),
                                    PowerLawParams(2.2, 3, math.inf, True)])
def test_discrete_pmf_matches(params):
    s = sample_power_law(params, 400_000, seed=1)
    assert s.is_integral
    x = s.values
    k0 = math.ceil(params.w_min)
    for k in range(k0, k0 + 5):
        expect = params.cdf(k) - params.cdf(k - 1)
        freq = np.mean(x == k)
        assert abs(freq - expect) < 5 * math.sqrt(expect * (1 - expect) / x.size)


def test_discrete_mean_bounded():
    p = PowerLawParams(2.5, 1, 63, True)
    s = sample_power_law(p, 10**6, seed=2)
    assert abs(s.values.mean() / p.mean() - 1) < 0.01


def test_max_statistic_exact_expectation():
    # E[max] of n i.i.d. Zipf(3) draws, summed exactly from the CDF
    p = PowerLawParams(3.0, 1, math.inf, True)
    n = 10**4
    k = np.arange(0, 10**6, dtype=float)
    e_max = float(np.sum(1.0 - p.cdf(k) ** n))
    assert abs(e_max / 100 - 1) < 0.25


def test_max_statistic_monte_carlo():
    # the max has infinite variance here, so 200-trial means still wander;
    # 5000 trials keep the check meaningful at the 25% tolerance
    p = PowerLawParams(3.0, 1, math.inf, True)
    rng = np.random.default_rng(0)
    maxima = np.concatenate([sample_power_law(p, 250 * 10**4, seed=rng).values.reshape(250, 10**4).max(axis=1)
                             for _ in range(20)])
    assert abs(np.mean(maxima) / 100 - 1) < 0.25


def test_determinism():
    p = PowerLawParams(2.5, 1, 100, True)
    assert sample_power_law(p, 1000, seed=7) == sample_power_law(p, 1000, seed=7)


def test_moments_examples():
    assert moments(WeightSequence([1, 1, 1]), 2) == 1
    assert moments(WeightSequence([1, 2, 3]), 2) == pytest.approx(14 / 3, rel=1e-15)
    assert moments(WeightSequence([1, 2, 3]), 1) == 2
    with pytest.raises(DomainError):
        moments(WeightSequence([]), 1)
    with pytest.raises(ParameterError):
        moments(WeightSequence([1]), 0)


def test_sequence_is_immutable_and_cached():
    s = WeightSequence([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5
    assert moments(s, 3) is moments(s, 3)


def test_sequence_rejects_bad_values():
    for bad in ([0, 1], [-1.0], [np.nan], [np.inf]):
        with pytest.raises(ParameterError):
            WeightSequence(bad)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(1.0, 1e4), min_size=1, max_size=200))
def test_moment_properties(vals):
    s = WeightSequence(vals)
    m1, m2 = moments(s, 1), moments(s, 2)
    assert m1**2 <= m2 * (1 + 1e-12)
    ref = math.fsum(v * v for v in vals) / len(vals)
    assert abs(m2 - ref) <= 1e-12 * ref


def test_assumptions_constant_pass():
    r = check_assumptions(constant(1, 100, Side.LEFT), constant(1, 100, Side.RIGHT), 0.2)
    assert r.well_defined_probs and r.bounded_range and r.bounded_moments


def test_assumptions_well_defined_boundary():
    SL = WeightSequence([100, 1, 1], side=Side.LEFT)
    assert check_assumptions(SL, constant(1, 100, Side.RIGHT), 0.2).well_defined_probs
    SR = WeightSequence([2] + [1] * 98 + [0.99], side=Side.RIGHT)
    # n_R M_R1 = 99.99 + ... < 100 * 2
    assert not check_assumptions(SL, SR, 0.2).well_defined_probs


def test_assumptions_power_law_moments():
    n = 10**5
    SR = sample_power_law(PowerLawParams(3.5, 1, n**0.3, True), n, seed=1, side=Side.RIGHT)
    r = check_assumptions(SR.with_side(Side.LEFT), SR, 0.2)
    assert r.bounded_moments
    assert set(r.details) >= {"slack"}


def test_assumptions_delta_positive():
    with pytest.raises(ParameterError):
        check_assumptions(constant(1, 3), constant(1, 3, Side.RIGHT), 0)


def test_cap_clamps():
    s = cap(WeightSequence([1, 5, 100]), 10)
    assert s.values.tolist() == [1, 5, 10]


def test_weights_roundtrip(tmp_path):
    for vals in ([1, 2, 3], [1.5, 2.25, 1e3]):
        s = WeightSequence(vals, side=Side.RIGHT)
        path = tmp_path / "w.txt"
        write_weights(s, path, header="test")
        back = read_weights(path, Side.RIGHT)
        assert back == s
