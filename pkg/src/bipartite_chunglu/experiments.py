"""Experiment drivers: model-vs-data comparisons and the simulated figure protocols."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParameterError, SizeError
from .projection import DEFAULT_MAX_WORK, project, projection_work
from .sampler import sample_fast, sample_random_intersection
from .stats import (
    coefficient_report,
    count_triangles,
    degree_binned,
    global_clustering,
    weight_binned_conditional,
)
from .theory import MomentBundle, predict_closure, predict_global_clustering, predict_local_clustering
from .weights import PowerLawParams, Side, sample_power_law

# full-size node counts that the figure --scale factor multiplies
FIGURE_BASE_N = {"fig1": 10**7, "fig2": 10**6, "fig3": 10**7}
FIG2_ALPHA_R_GRID = tuple(round(3.1 + 0.2 * i, 1) for i in range(10))


def resolve_wmax(n, wmax=None, wmax_exp=None):
    """Weight cap from either an absolute value or the ``n**exponent`` rule."""
    if wmax is not None and wmax_exp is not None:
        raise ParameterError("give either wmax or wmax_exp, not both")
    if wmax_exp is not None:
        return float(n) ** wmax_exp
    return math.inf if wmax is None else float(wmax)


def zipf_weights(n, alpha, w_max, seed, side):
    return sample_power_law(PowerLawParams(alpha, 1.0, w_max, discrete=True), n, seed=seed, side=side)


def child_seeds(seed, k):
    return [int(s.generate_state(1, dtype=np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(k)]


@dataclass
class ModelSample:
    SL: object
    SR: object
    mb: MomentBundle
    graph: object
    projection: object
    stats: object


def simulate(n_left, n_right, alpha_L, alpha_R, w_max, seed, max_work=DEFAULT_MAX_WORK):
    """Zipf weights on both sides, one fast sample, its projection and statistics."""
    s_l, s_r, s_g = child_seeds(seed, 3)
    SL = zipf_weights(n_left, alpha_L, w_max, s_l, Side.LEFT)
    SR = zipf_weights(n_right, alpha_R, w_max, s_r, Side.RIGHT)
    G = sample_fast(SL, SR, seed=s_g)
    P = project(G, max_work=max_work)
    return ModelSample(SL, SR, MomentBundle.from_sequences(SL, SR), G, P, count_triangles(P))


def weight_curve_rows(sample: ModelSample, mode, max_weight=20, min_bin_size=5):
    """``(w, empirical, predicted, n_nodes)`` for weights up to ``max_weight``."""
    curve = weight_binned_conditional(sample.projection, sample.SL, mode=mode, min_bin_size=min_bin_size,
                                      stats=sample.stats)
    rows = []
    for w, val, cnt in curve.rows():
        if w > max_weight:
            continue
        pred = predict_local_clustering(w, sample.mb) if mode == "clustering" else predict_closure(sample.mb)
        rows.append((int(w), val, pred, cnt))
    return rows


def figure_weight_curves(n, alpha_L, alpha_R, wmax_exp=0.3, seed=0, max_weight=20, min_bin_size=5):
    """Clustering and closure per weight on one simulated graph (shared by both figures)."""
    w_max = resolve_wmax(n, wmax_exp=wmax_exp)
    sample = simulate(n, n, alpha_L, alpha_R, w_max, seed)
    return sample, {
        "clustering": weight_curve_rows(sample, "clustering", max_weight, min_bin_size),
        "closure": weight_curve_rows(sample, "closure", max_weight, min_bin_size),
    }


def figure2_rows(n, alpha_L, alpha_R_grid=FIG2_ALPHA_R_GRID, wmax_exp=0.5, seed=0):
    """``(alpha_R, sampled global clustering, predicted)`` across the sweep."""
    w_max = resolve_wmax(n, wmax_exp=wmax_exp)
    rows = []
    for a_r, s in zip(alpha_R_grid, child_seeds(seed, len(alpha_R_grid))):
        sample = simulate(n, n, alpha_L, a_r, w_max, s)
        rows.append((a_r, global_clustering(sample.stats), predict_global_clustering(sample.mb)))
    return rows


def closure_slope(rows):
    """Least-squares slope of closure value against weight."""
    w = np.array([r[0] for r in rows], dtype=float)
    v = np.array([r[1] for r in rows], dtype=float)
    if w.size < 2:
        return float("nan")
    return float(np.polyfit(w, v, 1)[0])


@dataclass
class ComparisonResult:
    """Coefficients of the data projection and of the two random models."""

    data: object
    ours: dict = field(default_factory=dict)
    ri: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    FIELDS = ("mean_local_clustering", "global_clustering", "mean_local_closure")

    def table(self):
        rows = []
        for f in self.FIELDS:
            row = {"coefficient": f, "data": getattr(self.data, f) if self.data else None}
            for name, res in (("ours", self.ours), ("ri", self.ri)):
                vals = [v for v in res.get(f, []) if v is not None]
                row[name] = float(np.mean(vals)) if vals else None
                row[f"{name}_var"] = float(np.var(vals, ddof=1)) if len(vals) > 1 else None
            rows.append(row)
        return rows


def compare(graph, trials=1, seed=0, max_work=DEFAULT_MAX_WORK):
    """Coefficients of ``graph``'s projection versus ``trials`` samples of each null model.

    Both models reuse the data degrees: ours as Chung-Lu weights on both sides,
    the random-intersection baseline as exact left degrees with ``n_right``
    fixed to the data's right node count.
    """
    from .ingest import degrees_as_weights

    SL, SR = degrees_as_weights(graph)
    result = ComparisonResult(data=None)
    try:
        result.data = coefficient_report(project(graph, max_work=max_work))
    except SizeError as exc:
        result.notes.append(f"data projection skipped: {exc}")
    for f in ComparisonResult.FIELDS:
        result.ours[f] = []
        result.ri[f] = []
    for s in child_seeds(seed, trials):
        s_ours, s_ri = child_seeds(s, 2)
        for name, target, draw in (
            ("ours", result.ours, lambda: sample_fast(SL, SR, seed=s_ours)),
            ("ri", result.ri, lambda: sample_random_intersection(SL, len(SR), seed=s_ri)),
        ):
            G = draw()
            if projection_work(G) > max_work:
                result.notes.append(f"{name} trial skipped: projection exceeds guard")
                continue
            rep = coefficient_report(project(G, max_work=max_work))
            for f in ComparisonResult.FIELDS:
                target[f].append(getattr(rep, f))
    return result


def degree_curves(graph, seed=0, mode="clustering", min_bin_size=5, max_work=DEFAULT_MAX_WORK):
    """Local coefficient vs. degree for the data and one sample of each model.

    Returns ``{degree: (data, ours, ri)}`` with ``None`` where a bin is missing.
    """
    from .ingest import degrees_as_weights

    SL, SR = degrees_as_weights(graph)
    s_ours, s_ri = child_seeds(seed, 2)
    curves = [
        degree_binned(project(graph, max_work=max_work), mode, min_bin_size),
        degree_binned(project(sample_fast(SL, SR, seed=s_ours), max_work=max_work), mode, min_bin_size),
        degree_binned(project(sample_random_intersection(SL, len(SR), seed=s_ri), max_work=max_work), mode,
                      min_bin_size),
    ]
    keys = sorted(set().union(*curves))
    return {k: tuple(c.get(k) for c in curves) for k in keys}
