import numpy as np
import pytest

from bipartite_chunglu.exceptions import ParameterError
from bipartite_chunglu.montecarlo import event_frequencies, left_degree_samples
from bipartite_chunglu.weights import Side, WeightSequence, constant


def test_hand_values_both_samplers():
    SL, SR = WeightSequence([1, 1, 1], side=Side.LEFT), WeightSequence([1, 1], side=Side.RIGHT)
    n = 100_000
    for sampler in ("naive", "fast"):
        fr = event_frequencies(SL, SR, n, seed=3, sampler=sampler)
        assert abs(fr.edge[0, 1] - 7 / 16) < 4 * np.sqrt(7 / 16 * 9 / 16 / n)
        assert abs(fr.wedge[0, 1, 2] - 0.265625) < 4 * np.sqrt(0.265625 * 0.734375 / n)
        assert np.allclose(fr.edge, fr.edge.T)


def test_rejects_large_and_unknown():
    with pytest.raises(ParameterError):
        event_frequencies(constant(1, 50), constant(1, 3, Side.RIGHT), 10)
    with pytest.raises(ParameterError):
        event_frequencies(constant(1, 2), constant(1, 2, Side.RIGHT), 10, sampler="x")


def test_degree_samples_shape_and_mean():
    d = left_degree_samples(constant(3, 4), constant(1, 1000, Side.RIGHT), [0, 2], 5000, seed=1)
    assert d.shape == (5000, 2)
    assert abs(d.mean() - 3) < 0.05
    assert np.array_equal(d, left_degree_samples(constant(3, 4), constant(1, 1000, Side.RIGHT), [0, 2], 5000, seed=1))
