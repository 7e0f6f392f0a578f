import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipartite_chunglu.exceptions import ParameterError, SizeError
from bipartite_chunglu.montecarlo import event_frequencies
from bipartite_chunglu.sampler import (
    BipartiteGraph,
    GroupPair,
    expected_edges,
    group_pairs,
    read_bipartite_edgelist,
    sample,
    sample_fast,
    sample_group_edges,
    sample_naive,
    sample_random_intersection,
    write_bipartite_edgelist,
)
from bipartite_chunglu.weights import PowerLawParams, Side, WeightSequence, constant, sample_power_law


def L(v):
    return WeightSequence(v, side=Side.LEFT)


def R(v):
    return WeightSequence(v, side=Side.RIGHT)


def test_graph_canonicalizes_and_validates():
    G = BipartiteGraph(2, 2, [(1, 1), (0, 0), (1, 1)])
    assert G.edges.tolist() == [[0, 0], [1, 1]]
    with pytest.raises(ParameterError):
        BipartiteGraph(1, 1, [(0, 1)])
    assert G.left_degrees().tolist() == [1, 1]
    assert G.swap_sides().edge_set() == {(0, 0), (1, 1)}


def test_naive_forced_edge():
    G = sample_naive(L([1]), R([1]), seed=0)
    assert G.edge_set() == {(0, 0)}


def test_naive_mean_edge_count():
    counts = [sample_naive(L([1, 1]), R([1, 1]), seed=s).n_edges for s in range(20_000)]
    assert abs(np.mean(counts) - 2) < 3 * np.sqrt(1 / 20_000)


def test_capping_probabilities():
    fr = event_frequencies(L([2]), R([3, 1]), 50_000, seed=1).bipartite
    assert fr[0, 0] == 1.0
    assert abs(fr[0, 1] - 0.5) < 4 * np.sqrt(0.25 / 50_000)


def test_fast_single_group():
    n = 2000
    SL, SR = constant(1, n, Side.LEFT), constant(1, n, Side.RIGHT)
    groups = list(group_pairs(SL, SR))
    assert len(groups) == 1 and groups[0].m == n * n and groups[0].p == pytest.approx(1 / n)
    assert expected_edges(SL, SR) == pytest.approx(n)


def test_fast_capped_group_always_present():
    SL, SR = L([1, 1, 2]), R([1, 3])
    gp = {(g.w_left, g.w_right): g for g in group_pairs(SL, SR)}
    assert len(gp) == 4 and gp[(2, 3)].p == 1.0
    for s in range(50):
        assert (2, 1) in sample_fast(SL, SR, seed=s).edge_set()


def test_fast_rejects_real_weights():
    with pytest.raises(ParameterError, match="sample_naive"):
        sample_fast(L([1.5]), R([1]))


def test_group_edges_examples():
    one = GroupPair(1, 1, np.array([4]), np.array([7]), 1.0)
    assert sample_group_edges(one, seed=0).tolist() == [[4, 7]]
    none = GroupPair(1, 1, np.arange(2), np.arange(3), 1e12)
    assert sample_group_edges(none, seed=0).shape == (0, 2)


def test_group_edges_distinct_and_uniform():
    g = GroupPair(1, 1, np.arange(2), np.arange(2), 2.0)
    assert g.m == 4 and g.p == 0.5
    hits = np.zeros((2, 2))
    trials = 40_000
    for s in range(trials):
        e = sample_group_edges(g, seed=s)
        assert len({tuple(r) for r in e.tolist()}) == len(e)
        for a, b in e:
            hits[a, b] += 1
    assert np.all(np.abs(hits / trials - 0.5) < 0.01)


def test_group_edges_match_fast_slice():
    SL = L([1, 1, 2, 2, 2])
    SR = R([1, 2, 2, 3])
    G = sample_fast(SL, SR, seed=42)
    for g in group_pairs(SL, SR):
        mine = {tuple(r) for r in sample_group_edges(g, seed=42).tolist()}
        part = {(u, v) for u, v in G.edge_set() if SL[u] == g.w_left and SR[v] == g.w_right}
        assert mine == part


def test_samplers_agree_on_zipf_instance():
    # the exact marginal is the same for both; compare their mean degrees
    p = PowerLawParams(2.5, 1, 30, True)
    SL = sample_power_law(p, 300, seed=1, side=Side.LEFT)
    SR = sample_power_law(p, 300, seed=2, side=Side.RIGHT)
    trials = 300
    fast = sum(sample_fast(SL, SR, seed=s).left_degrees() for s in range(trials)) / trials
    naive = sum(sample_naive(SL, SR, seed=s).left_degrees() for s in range(trials)) / trials
    exact = np.minimum(np.outer(SL.values, SR.values) / SR.total(), 1).sum(axis=1)
    se = np.sqrt(exact / trials)
    assert np.max(np.abs(fast - exact) / se) < 5
    assert np.max(np.abs(naive - exact) / se) < 5


def test_random_intersection():
    G = sample_random_intersection(L([5]), 5, seed=0)
    assert G.edge_set() == {(0, v) for v in range(5)}
    with pytest.raises(ParameterError):
        sample_random_intersection(L([6]), 5)
    both0 = np.mean([sample_random_intersection(L([1, 1]), 2, seed=s).edge_set() == {(0, 0), (1, 0)}
                     for s in range(20_000)])
    assert abs(both0 - 0.25) < 4 * np.sqrt(0.25 * 0.75 / 20_000)
    rng = np.random.default_rng(3)
    deg = rng.integers(1, 20, 100)
    assert np.array_equal(sample_random_intersection(L(deg), 50, seed=1).left_degrees(), deg)


def test_naive_guard():
    with pytest.raises(SizeError):
        sample_naive(constant(1, 1000, Side.LEFT), constant(1, 1000, Side.RIGHT), max_pairs=10**5)


def test_dispatch_and_unknown():
    SL, SR = L([1, 2]), R([2, 1])
    for name in ("fast", "naive", "random-intersection"):
        assert sample(SL, SR, name, seed=1) == sample(SL, SR, name, seed=1)
    with pytest.raises(ParameterError):
        sample(SL, SR, "bogus")


def test_side_check():
    with pytest.raises(ParameterError):
        sample_naive(R([1]), R([1]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=15), st.lists(st.integers(1, 6), min_size=1, max_size=15),
       st.integers(0, 2**32))
def test_determinism_and_simple_output(wl, wr, seed):
    SL, SR = L(wl), R(wr)
    for sampler in ("naive", "fast"):
        a = sample(SL, SR, sampler, seed)
        assert a == sample(SL, SR, sampler, seed)
        keys = a.edges[:, 0] * len(wr) + a.edges[:, 1]
        assert np.unique(keys).size == keys.size
        assert a.left_degrees().sum() == a.right_degrees().sum() == a.n_edges


def test_edgelist_roundtrip(tmp_path):
    G = sample_fast(L([1, 2, 3]), R([3, 2, 1, 1]), seed=5)
    write_bipartite_edgelist(G, tmp_path / "g.txt", header="x")
    assert read_bipartite_edgelist(tmp_path / "g.txt") == G
