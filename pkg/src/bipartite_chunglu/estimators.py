"""scikit-learn style wrappers around the functional API.

``BipartiteChungLu`` learns weight sequences from an observed bipartite
graph (or takes them directly) and then samples and predicts;
``BipartiteProjector`` is a stateless transformer; ``DiscretePowerLaw`` fits
a tail exponent.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import theory
from .exceptions import ParameterError
from .fitting import fit_power_law
from .ingest import degrees_as_weights
from .projection import DEFAULT_MAX_WORK, project
from .sampler import DEFAULT_MAX_PAIRS, BipartiteGraph, sample
from .weights import Side, WeightSequence


def as_bipartite_graph(X, n_left=None, n_right=None) -> BipartiteGraph:
    """Accept a :class:`BipartiteGraph` or an ``(m, 2)`` integer edge array."""
    if isinstance(X, BipartiteGraph):
        return X
    e = np.asarray(X)
    if e.ndim != 2 or e.shape[1] != 2:
        raise ParameterError(f"expected an (m, 2) edge array, got shape {e.shape}")
    if e.size and np.any(e != np.floor(e)):
        raise ParameterError("edge ids must be integers")
    e = e.astype(np.int64)
    if n_left is None:
        n_left = int(e[:, 0].max()) + 1 if e.size else 0
    if n_right is None:
        n_right = int(e[:, 1].max()) + 1 if e.size else 0
    return BipartiteGraph(n_left, n_right, e)


class BipartiteChungLu(BaseEstimator):
    """Bipartite Chung-Lu model with weights taken from observed degrees.

    Parameters
    ----------
    sampler : {'fast', 'naive', 'random-intersection'}
    random_state : int, Generator or None
        Seed used by :meth:`sample` when no explicit seed is passed.
    max_pairs : int
        Coin-flip guard for the naive sampler.
    """

    def __init__(self, sampler="fast", random_state=None, max_pairs=DEFAULT_MAX_PAIRS):
        self.sampler = sampler
        self.random_state = random_state
        self.max_pairs = max_pairs

    def fit(self, X, y=None):
        """Learn left/right weights as the bipartite degrees of ``X`` (isolated nodes dropped)."""
        G = as_bipartite_graph(X)
        SL, SR = degrees_as_weights(G)
        return self._set_weights(SL, SR)

    def fit_weights(self, SL, SR):
        """Use given weight sequences instead of learning them."""
        SL = SL if isinstance(SL, WeightSequence) else WeightSequence(SL, side=Side.LEFT)
        SR = SR if isinstance(SR, WeightSequence) else WeightSequence(SR, side=Side.RIGHT)
        return self._set_weights(SL, SR)

    def _set_weights(self, SL, SR):
        self.left_weights_ = SL
        self.right_weights_ = SR
        self.n_left_ = len(SL)
        self.n_right_ = len(SR)
        self.moments_ = theory.MomentBundle.from_sequences(SL, SR)
        return self

    def sample(self, random_state=None) -> BipartiteGraph:
        check_is_fitted(self, "moments_")
        seed = self.random_state if random_state is None else random_state
        return sample(self.left_weights_, self.right_weights_, self.sampler, seed, max_pairs=self.max_pairs)

    def sample_projection(self, random_state=None, keep_multiplicity=False):
        return project(self.sample(random_state), keep_multiplicity=keep_multiplicity)

    def predict_expected_degree(self, w):
        check_is_fitted(self, "moments_")
        return theory.predict_expected_degree(np.asarray(w, dtype=float), self.moments_)

    def predict_local_clustering(self, w):
        check_is_fitted(self, "moments_")
        return theory.predict_local_clustering(np.asarray(w, dtype=float), self.moments_)

    def predict_global_clustering(self):
        check_is_fitted(self, "moments_")
        return theory.predict_global_clustering(self.moments_)

    def predict_closure(self):
        check_is_fitted(self, "moments_")
        return theory.predict_closure(self.moments_)


class BipartiteProjector(TransformerMixin, BaseEstimator):
    """Transformer from a bipartite graph to its left-side projection."""

    def __init__(self, keep_multiplicity=False, max_work=DEFAULT_MAX_WORK):
        self.keep_multiplicity = keep_multiplicity
        self.max_work = max_work

    def fit(self, X=None, y=None):
        # stateless
        self.fitted_ = True
        return self

    def transform(self, X):
        return project(as_bipartite_graph(X), keep_multiplicity=self.keep_multiplicity, max_work=self.max_work)


class DiscretePowerLaw(BaseEstimator):
    """Discrete power-law tail fit; ``x_min=None`` selects the cutoff by KS distance."""

    def __init__(self, x_min=None, max_quantile=0.9):
        self.x_min = x_min
        self.max_quantile = max_quantile

    def fit(self, X, y=None):
        self.fit_ = fit_power_law(np.ravel(np.asarray(X)), x_min=self.x_min, max_quantile=self.max_quantile)
        self.alpha_ = self.fit_.alpha
        self.x_min_ = self.fit_.x_min
        self.stderr_ = self.fit_.stderr
        self.ks_distance_ = self.fit_.ks_distance
        self.n_tail_ = self.fit_.n_tail
        return self
