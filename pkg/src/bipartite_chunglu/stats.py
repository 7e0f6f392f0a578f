"""Degrees, triangles, wedges, 2-paths and the clustering/closure coefficients built from them."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

import numba as nb
import numpy as np

from .exceptions import ParameterError
from .projection import ProjectedGraph


@nb.njit(cache=True)
def _oriented_triangles(indptr, indices, n):
    deg = indptr[1:] - indptr[:-1]
    # rank by (degree, id); orient each edge towards the higher rank
    rank = np.empty(n, dtype=np.int64)
    order = np.argsort(deg * np.int64(n) + np.arange(n), kind="mergesort")
    for r in range(n):
        rank[order[r]] = r
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        c = 0
        for k in range(indptr[u], indptr[u + 1]):
            if rank[indices[k]] > rank[u]:
                c += 1
        out_ptr[u + 1] = out_ptr[u] + c
    out_idx = np.empty(out_ptr[n], dtype=np.int64)
    for u in range(n):
        pos = out_ptr[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if rank[v] > rank[u]:
                out_idx[pos] = v
                pos += 1
    tri = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    for u in range(n):
        for k in range(out_ptr[u], out_ptr[u + 1]):
            mark[out_idx[k]] = u
        for k in range(out_ptr[u], out_ptr[u + 1]):
            v = out_idx[k]
            for t in range(out_ptr[v], out_ptr[v + 1]):
                w = out_idx[t]
                if mark[w] == u:
                    tri[u] += 1
                    tri[v] += 1
                    tri[w] += 1
    return tri


@nb.njit(cache=True)
def _two_paths(indptr, indices):
    n = indptr.size - 1
    out = np.zeros(n, dtype=np.int64)
    for u in range(n):
        s = 0
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            s += indptr[v + 1] - indptr[v] - 1
        out[u] = s
    return out


class GraphStats:
    """Per-node degree ``d``, triangle count ``T``, wedges ``d(d-1)/2`` and 2-paths ``W_h``."""

    def __init__(self, degree, triangles, two_paths):
        self.degree = np.asarray(degree, dtype=np.int64)
        self.triangles = np.asarray(triangles, dtype=np.int64)
        self.two_paths = np.asarray(two_paths, dtype=np.int64)
        self.wedges = self.degree * (self.degree - 1) // 2

    @property
    def n(self):
        return self.degree.size

    @property
    def triangle_total(self):
        return int(self.triangles.sum()) // 3

    def local_clustering(self, u):
        return local_clustering(self, u)

    def local_closure(self, u):
        return local_closure(self, u)

    def clustering_array(self):
        """Local clustering per node, NaN where undefined (degree < 2)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.triangles / self.wedges.astype(float)
        out[self.wedges == 0] = np.nan
        return out

    def closure_array(self):
        """Local closure per node, NaN where undefined (no 2-path)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 2.0 * self.triangles / self.two_paths.astype(float)
        out[self.two_paths == 0] = np.nan
        return out


def count_triangles(P: ProjectedGraph) -> GraphStats:
    """Exact per-node triangle counts by degree-ordered neighbourhood marking."""
    indptr, indices = P.indptr, P.indices
    tri = _oriented_triangles(indptr, indices, np.int64(P.n))
    return GraphStats(np.diff(indptr), tri, _two_paths(indptr, indices))


def local_clustering(stats: GraphStats, u):
    """``2T(u) / (d(u)(d(u)-1))``, or ``None`` when ``d(u) < 2``."""
    w = int(stats.wedges[u])
    if w == 0:
        return None
    return int(stats.triangles[u]) / w


def local_closure(stats: GraphStats, u):
    """``2T(u) / W_h(u)``, or ``None`` when ``u`` heads no 2-path."""
    h = int(stats.two_paths[u])
    if h == 0:
        return None
    return 2 * int(stats.triangles[u]) / h


def global_clustering(stats: GraphStats):
    """``sum 2T / sum d(d-1)``; ``None`` for a wedge-free graph."""
    den = int(stats.wedges.sum())
    if den == 0:
        return None
    return int(stats.triangles.sum()) / den


def global_closure(stats: GraphStats):
    """``sum 2T / sum W_h``; equal to :func:`global_clustering` on every graph."""
    den = int(stats.two_paths.sum())
    if den == 0:
        return None
    return 2 * int(stats.triangles.sum()) / den


@dataclass
class CoefficientReport:
    mean_local_clustering: float | None
    global_clustering: float | None
    mean_local_closure: float | None
    defined_clustering_nodes: int
    defined_closure_nodes: int

    @property
    def empty(self):
        return self.defined_clustering_nodes == 0 and self.defined_closure_nodes == 0

    def as_tuple(self):
        return (self.mean_local_clustering, self.global_clustering, self.mean_local_closure)

    def to_dict(self):
        return asdict(self)

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def coefficient_report(P, stats: GraphStats | None = None) -> CoefficientReport:
    """Mean local clustering, global clustering and mean local closure.

    Nodes with an undefined coefficient are skipped, not counted as zero.
    """
    if stats is None:
        stats = count_triangles(P)
    cl = stats.clustering_array()
    clo = stats.closure_array()
    cl_ok = ~np.isnan(cl)
    clo_ok = ~np.isnan(clo)
    return CoefficientReport(
        mean_local_clustering=float(cl[cl_ok].mean()) if cl_ok.any() else None,
        global_clustering=global_clustering(stats),
        mean_local_closure=float(clo[clo_ok].mean()) if clo_ok.any() else None,
        defined_clustering_nodes=int(cl_ok.sum()),
        defined_closure_nodes=int(clo_ok.sum()),
    )


class BinnedCurve(dict):
    """Mapping ``bin -> value`` that also records ``n_nodes`` per bin."""

    def __init__(self, values=(), n_nodes=None):
        super().__init__(values)
        self.n_nodes = dict(n_nodes or {})

    def rows(self):
        return [(k, self[k], self.n_nodes.get(k, 0)) for k in sorted(self)]

    def to_csv(self, fh, header=None):
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin", "value", "n_nodes"])
        for b, v, c in self.rows():
            w.writerow([_fmt_bin(b), repr(float(v)), c])


def _fmt_bin(b):
    if isinstance(b, float) and b.is_integer():
        return str(int(b))
    return str(b)


def _binned_ratio(keys, num, den, min_bin_size):
    uniq, inv, counts = np.unique(keys, return_inverse=True, return_counts=True)
    num_s = np.bincount(inv, weights=num, minlength=uniq.size)
    den_s = np.bincount(inv, weights=den, minlength=uniq.size)
    curve = BinnedCurve()
    for k, a, b, c in zip(uniq.tolist(), num_s, den_s, counts.tolist()):
        if b == 0 or (min_bin_size and c < min_bin_size):
            continue
        curve[k] = float(a / b)
        curve.n_nodes[k] = int(c)
    return curve


def weight_binned_conditional(P, weights, mode="clustering", min_bin_size=None, stats=None) -> BinnedCurve:
    """Wedge-weighted clustering (or 2-path-weighted closure) per distinct node weight.

    Clustering: ``sum T / sum d(d-1)/2`` over nodes of a weight; closure:
    ``sum T / sum W_h/2``. Bins with no wedges, or fewer than
    ``min_bin_size`` nodes when given, are dropped.
    """
    w = np.asarray(getattr(weights, "values", weights))
    if stats is None:
        stats = count_triangles(P)
    if w.shape[0] != stats.n:
        raise ParameterError(f"{w.shape[0]} weights for {stats.n} nodes")
    tri = stats.triangles.astype(float)
    if mode == "clustering":
        den = stats.wedges.astype(float)
    elif mode == "closure":
        den = stats.two_paths.astype(float) / 2.0
    else:
        raise ParameterError(f"mode must be 'clustering' or 'closure', got {mode!r}")
    return _binned_ratio(w, tri, den, min_bin_size)


def weight_binned_mean(P, weights, mode="clustering", min_bin_size=None, stats=None) -> BinnedCurve:
    """Unweighted mean of the local coefficient per weight (undefined nodes skipped)."""
    w = np.asarray(getattr(weights, "values", weights))
    if stats is None:
        stats = count_triangles(P)
    if w.shape[0] != stats.n:
        raise ParameterError(f"{w.shape[0]} weights for {stats.n} nodes")
    return _binned_mean(w, stats, mode, min_bin_size)


def degree_binned(P, mode="clustering", min_bin_size=None, stats=None) -> BinnedCurve:
    """Mean local clustering (or closure) of the nodes with each exact degree."""
    if stats is None:
        stats = count_triangles(P)
    return _binned_mean(stats.degree, stats, mode, min_bin_size)


def _binned_mean(keys, stats, mode, min_bin_size):
    if mode == "clustering":
        vals = stats.clustering_array()
    elif mode == "closure":
        vals = stats.closure_array()
    else:
        raise ParameterError(f"mode must be 'clustering' or 'closure', got {mode!r}")
    ok = ~np.isnan(vals)
    return _binned_ratio(np.asarray(keys)[ok], vals[ok], np.ones(int(ok.sum())), min_bin_size)


def wedge_weighted_mean_clustering(stats: GraphStats):
    """Mean of local clustering weighted by each node's wedge count.

    Equals :func:`global_clustering` identically; kept as a separate route
    for checking that identity.
    """
    cl = stats.clustering_array()
    ok = ~np.isnan(cl)
    if not ok.any():
        return None
    wts = stats.wedges[ok].astype(float)
    return float(math.fsum((cl[ok] * wts).tolist()) / math.fsum(wts.tolist()))
