"""Closed-form large-graph predictions and exact finite-n probabilities for the projected model.

The asymptotic predictors are functions of weight moments only. The exact
``p_*_exact`` routines evaluate the finite product forms for a concrete right
weight sequence; they substitute min-capped edge probabilities, which keeps
them exact for the model even when some ``w_u w_v`` exceeds ``sum(S_R)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .weights import WeightSequence, moments


@dataclass(frozen=True)
class MomentBundle:
    n_left: int
    n_right: int
    M_L1: float
    M_L2: float
    M_R1: float
    M_R2: float
    M_R3: float
    M_R4: float

    @classmethod
    def from_sequences(cls, SL: WeightSequence, SR: WeightSequence):
        return cls(
            n_left=len(SL),
            n_right=len(SR),
            M_L1=moments(SL, 1),
            M_L2=moments(SL, 2),
            M_R1=moments(SR, 1),
            M_R2=moments(SR, 2),
            M_R3=moments(SR, 3),
            M_R4=moments(SR, 4),
        )

    @property
    def clustering_ratio(self):
        """``M_R2**2 / (M_R3 M_R1)``, at most 1 by Cauchy-Schwarz."""
        return self.M_R2**2 / (self.M_R3 * self.M_R1)

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class EdgeProbability:
    first_order: float
    corrected: float


def p_edge_asymptotic(w_u1, w_u2, mb: MomentBundle) -> EdgeProbability:
    """Large-``n_R`` projected edge probability and its second-order refinement."""
    if w_u1 < 0 or w_u2 < 0:
        raise ParameterError("weights must be non-negative")
    p = mb.M_R2 / mb.M_R1**2 * (w_u1 * w_u2 / mb.n_right)
    corrected = p - p * p / 2 + (p / 6 + mb.M_R4 / (2 * mb.n_right * mb.M_R2**2)) * p * p
    return EdgeProbability(p, corrected)


def _capped(w, wr, total):
    return np.minimum(w * wr / total, 1.0)


def _log_prod(terms):
    # sum of logs; exact zeros propagate to -inf
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(np.clip(terms, 0.0, 1.0))))


def _right_arrays(SR):
    wr = np.asarray(getattr(SR, "values", SR), dtype=float)
    if wr.size == 0:
        raise ParameterError("right weight sequence must be nonempty")
    total = SR.total() if isinstance(SR, WeightSequence) else float(np.sum(wr))
    return wr, total


def p_edge_exact(w_u1, w_u2, SR) -> float:
    """``1 - prod_v (1 - p_{u1 v} p_{u2 v})``: exact probability that two left nodes share a right neighbour."""
    wr, total = _right_arrays(SR)
    a = _capped(w_u1, wr, total)
    b = _capped(w_u2, wr, total)
    # log1p keeps tiny per-node terms accurate for very large n_R
    with np.errstate(divide="ignore"):
        s = float(np.sum(np.log1p(-(a * b))))
    return float(-np.expm1(s))


def p_no_wedge_exact(w_u, w_u1, w_u2, SR) -> float:
    """Probability that ``u`` is linked to neither ``u1`` nor ``u2`` in the projection."""
    wr, total = _right_arrays(SR)
    a = _capped(w_u, wr, total)
    b1 = _capped(w_u1, wr, total)
    b2 = _capped(w_u2, wr, total)
    terms = 1.0 - a * (b1 + b2) + a * b1 * b2
    return math.exp(_log_prod(terms))


def p_wedge_exact(w_u, w_u1, w_u2, SR) -> float:
    """Exact probability that ``(u1, u, u2)`` is a wedge centred at ``u``.

    Inclusion-exclusion: ``P(A1) + P(A2) + P(not A1 and not A2) - 1``.
    """
    return p_edge_exact(w_u, w_u1, SR) + p_edge_exact(w_u, w_u2, SR) + p_no_wedge_exact(w_u, w_u1, w_u2, SR) - 1.0


def p_triangle_common_exact(w_u, w_u1, w_u2, SR) -> float:
    """Probability that all three nodes share one right neighbour.

    This is the leading part of the triangle probability; triangles closed
    through three distinct right nodes (bipartite 6-cycles) are not included.
    """
    wr, total = _right_arrays(SR)
    x = _capped(w_u, wr, total) * _capped(w_u1, wr, total) * _capped(w_u2, wr, total)
    with np.errstate(divide="ignore"):
        s = float(np.sum(np.log1p(-x)))
    return float(-np.expm1(s))


def p_wedge_asymptotic(w_u, w_u1, w_u2, mb: MomentBundle) -> float:
    """Leading-order wedge probability ``(1 + M_R1 M_R3 / (M_R2^2 w_u)) p_{u u1} p_{u u2}``."""
    p1 = p_edge_asymptotic(w_u, w_u1, mb).first_order
    p2 = p_edge_asymptotic(w_u, w_u2, mb).first_order
    return (1.0 + 1.0 / (mb.clustering_ratio * w_u)) * p1 * p2


def p_triangle_asymptotic(w_u, w_u1, w_u2, mb: MomentBundle) -> float:
    p1 = p_edge_asymptotic(w_u, w_u1, mb).first_order
    p2 = p_edge_asymptotic(w_u, w_u2, mb).first_order
    return p1 * p2 / (mb.clustering_ratio * w_u)


def predict_expected_degree(w_u, mb: MomentBundle) -> float:
    """Expected projected degree, linear in the node weight."""
    return mb.M_R2 * mb.M_L1 / mb.M_R1**2 * (mb.n_left / mb.n_right) * w_u


def predict_local_clustering(w_u, mb: MomentBundle) -> float:
    """Conditional local clustering ``1 / (1 + ratio * w_u)``."""
    if np.any(np.asarray(w_u) <= 0):
        raise ParameterError("w_u must be positive")
    return 1.0 / (1.0 + mb.clustering_ratio * w_u)


def predict_global_clustering(mb: MomentBundle) -> float:
    return 1.0 / (1.0 + mb.clustering_ratio * mb.M_L2 / mb.M_L1)


def predict_closure(mb: MomentBundle) -> float:
    """Local closure prediction; weight-independent and equal to the global clustering."""
    return predict_global_clustering(mb)


def poisson_pmf(mean, k) -> float:
    """``exp(-mean) mean**k / k!`` evaluated in log space."""
    if mean < 0 or k < 0:
        raise ParameterError("mean and k must be non-negative")
    if k == 0:
        return math.exp(-mean)
    if mean == 0:
        return 0.0
    return math.exp(k * math.log(mean) - mean - math.lgamma(k + 1))


def predicted_projected_exponent(alpha_L, alpha_R) -> float:
    """Projected-degree tail exponent ``min(alpha_L, alpha_R - 1)``."""
    if alpha_L <= 1 or alpha_R <= 1:
        raise ParameterError("exponents must exceed 1")
    return min(alpha_L, alpha_R - 1.0)


def predictor_curve(kind, weights, mb: MomentBundle):
    """``[(w, predicted)]`` rows for ``kind`` in {clustering, closure, degree}."""
    fn = {
        "clustering": lambda w: predict_local_clustering(w, mb),
        "closure": lambda w: predict_closure(mb),
        "degree": lambda w: predict_expected_degree(w, mb),
    }.get(kind)
    if fn is None:
        raise ParameterError(f"unknown predictor {kind!r}")
    return [(w, float(fn(w))) for w in weights]


def write_predictor_csv(rows, fh, header=None):
    if header:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
    fh.write("w,predicted_value\n")
    for w, v in rows:
        fh.write(f"{w},{v!r}\n")
