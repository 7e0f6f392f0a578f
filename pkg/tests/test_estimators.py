import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from bipartite_chunglu.estimators import BipartiteChungLu, BipartiteProjector, DiscretePowerLaw, as_bipartite_graph
from bipartite_chunglu.exceptions import ParameterError
from bipartite_chunglu.sampler import BipartiteGraph
from bipartite_chunglu.weights import PowerLawParams, sample_power_law

EDGES = np.array([(0, 0), (1, 0), (1, 1), (2, 1), (2, 2)])


def test_fit_learns_degrees():
    m = BipartiteChungLu(random_state=3).fit(EDGES)
    assert m.left_weights_.values.tolist() == [1, 2, 2]
    assert m.right_weights_.values.tolist() == [2, 2, 1]
    assert m.moments_.M_L1 == pytest.approx(5 / 3)
    G = m.sample()
    assert G == m.sample() and G.n_left == 3


def test_predictions_and_unfitted():
    with pytest.raises(NotFittedError):
        BipartiteChungLu().predict_global_clustering()
    m = BipartiteChungLu().fit_weights([1, 1], [1, 1])
    assert m.predict_global_clustering() == pytest.approx(0.5)
    assert m.predict_closure() == m.predict_global_clustering()
    assert np.allclose(m.predict_local_clustering([1, 3]), [0.5, 0.25])
    assert m.predict_expected_degree(2) == pytest.approx(2)


def test_params_and_clone():
    m = BipartiteChungLu(sampler="naive", random_state=1)
    assert m.get_params()["sampler"] == "naive"
    c = clone(m).set_params(sampler="fast")
    assert c.sampler == "fast" and m.sampler == "naive"


def test_projector():
    P = BipartiteProjector(keep_multiplicity=True).fit_transform(EDGES)
    assert P.edge_set() == {(0, 1), (1, 2)}
    assert BipartiteProjector().transform(BipartiteGraph(3, 3, EDGES)).n_edges == 2


def test_edge_array_validation():
    with pytest.raises(ParameterError):
        as_bipartite_graph(np.zeros((3, 3)))
    with pytest.raises(ParameterError):
        as_bipartite_graph(np.array([[0.5, 1]]))


def test_power_law_estimator():
    x = sample_power_law(PowerLawParams(2.5, 1, 1000, True), 100_000, seed=1).values
    est = DiscretePowerLaw().fit(x)
    assert abs(est.alpha_ - 2.5) < 0.1 and est.x_min_ >= 1
    assert DiscretePowerLaw(x_min=1).fit(x).x_min_ == 1
