"""Bipartite Chung-Lu samplers: naive reference, weight-grouped fast sampler, random intersection."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numba as nb
import numpy as np

from . import _rng
from .exceptions import ParameterError, ParseError, SizeError
from .weights import Side, WeightSequence

DEFAULT_MAX_PAIRS = 2 * 10**9

# stream keys for the single-stream samplers; group pairs use their weights
_NAIVE_KEY = 0x6E616976
_RI_KEY = 0x72692D62


class BipartiteGraph:
    """Simple bipartite graph with edges stored as sorted ``(left, right)`` rows."""

    __slots__ = ("n_left", "n_right", "_edges", "_left_deg", "_right_deg")

    def __init__(self, n_left, n_right, edges=None, *, check=True):
        self.n_left = int(n_left)
        self.n_right = int(n_right)
        if self.n_left < 0 or self.n_right < 0:
            raise ParameterError("node counts must be non-negative")
        e = np.zeros((0, 2), dtype=np.int64) if edges is None else np.asarray(edges, dtype=np.int64)
        if e.size == 0:
            e = np.zeros((0, 2), dtype=np.int64)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ParameterError("edges must have shape (m, 2)")
        if check:
            if e.size and (e[:, 0].min() < 0 or e[:, 0].max() >= self.n_left
                           or e[:, 1].min() < 0 or e[:, 1].max() >= self.n_right):
                raise ParameterError("edge endpoint out of range")
            e = _canonical_edges(e, self.n_right)
        e.setflags(write=False)
        self._edges = e
        self._left_deg = None
        self._right_deg = None

    @property
    def edges(self):
        return self._edges

    @property
    def n_edges(self):
        return self._edges.shape[0]

    def left_degrees(self):
        if self._left_deg is None:
            self._left_deg = np.bincount(self._edges[:, 0], minlength=self.n_left).astype(np.int64)
        return self._left_deg

    def right_degrees(self):
        if self._right_deg is None:
            self._right_deg = np.bincount(self._edges[:, 1], minlength=self.n_right).astype(np.int64)
        return self._right_deg

    def swap_sides(self):
        return BipartiteGraph(self.n_right, self.n_left, self._edges[:, ::-1])

    def edge_set(self):
        return set(map(tuple, self._edges.tolist()))

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.n_left, self.n_right) == (other.n_left, other.n_right) and np.array_equal(
            self._edges, other._edges
        )

    __hash__ = None

    def __repr__(self):
        return f"BipartiteGraph(n_left={self.n_left}, n_right={self.n_right}, n_edges={self.n_edges})"


def _canonical_edges(e, n_right):
    if e.shape[0] == 0:
        return np.zeros((0, 2), dtype=np.int64)
    key = np.unique(e[:, 0] * np.int64(max(n_right, 1)) + e[:, 1])
    return np.column_stack((key // max(n_right, 1), key % max(n_right, 1))).astype(np.int64)


@dataclass(frozen=True)
class GroupPair:
    """All left nodes of one weight against all right nodes of one weight."""

    w_left: int
    w_right: int
    members_left: np.ndarray
    members_right: np.ndarray
    total_right: float

    @property
    def m(self):
        return len(self.members_left) * len(self.members_right)

    @property
    def p(self):
        return min(self.w_left * self.w_right / self.total_right, 1.0)


def _check_sides(SL, SR):
    if len(SL) == 0 or len(SR) == 0:
        raise ParameterError("weight sequences must be nonempty")
    if SL.side is not Side.LEFT or SR.side is not Side.RIGHT:
        raise ParameterError("expected (left, right) weight sequences")


# --------------------------------------------------------------------------- kernels


@nb.njit(cache=True)
def _naive_kernel(wl, wr, total_right, seed):
    state = _rng.new_stream(seed, _NAIVE_KEY, 0)
    cap = 1024
    left = np.empty(cap, dtype=np.int64)
    right = np.empty(cap, dtype=np.int64)
    m = 0
    for u in range(wl.size):
        for v in range(wr.size):
            p = wl[u] * wr[v] / total_right
            if _rng.uniform(state) < p:
                if m == cap:
                    cap *= 2
                    left2 = np.empty(cap, dtype=np.int64)
                    right2 = np.empty(cap, dtype=np.int64)
                    left2[:m] = left[:m]
                    right2[:m] = right[:m]
                    left = left2
                    right = right2
                left[m] = u
                right[m] = v
                m += 1
    return left[:m], right[:m]


@nb.njit(cache=True)
def _group_pair_count(seed, wl, wr, size_l, size_r, total_right):
    state = _rng.new_stream(seed, wl, wr)
    p = min(wl * wr / total_right, 1.0)
    return _rng.binomial(state, size_l * size_r, p), state


@nb.njit(cache=True)
def _fast_kernel(order_l, start_l, weight_l, order_r, start_r, weight_r, total_right, seed):
    """Grouped sampler over all (left weight, right weight) group pairs.

    Pass one draws each pair's binomial edge count from its own stream;
    pass two resumes that stream to place the edges, so output is
    independent of iteration order.
    """
    gl = weight_l.size
    gr = weight_r.size
    counts = np.empty(gl * gr, dtype=np.int64)
    states = np.empty(gl * gr, dtype=np.uint64)
    total = 0
    for a in range(gl):
        size_l = start_l[a + 1] - start_l[a]
        for b in range(gr):
            size_r = start_r[b + 1] - start_r[b]
            e, st = _group_pair_count(seed, weight_l[a], weight_r[b], size_l, size_r, total_right)
            counts[a * gr + b] = e
            states[a * gr + b] = st[0]
            total += e
    left = np.empty(total, dtype=np.int64)
    right = np.empty(total, dtype=np.int64)
    buf = np.empty(0, dtype=np.int64)
    pos = 0
    state = np.empty(1, dtype=np.uint64)
    for a in range(gl):
        size_l = start_l[a + 1] - start_l[a]
        for b in range(gr):
            e = counts[a * gr + b]
            if e == 0:
                continue
            size_r = start_r[b + 1] - start_r[b]
            state[0] = states[a * gr + b]
            if buf.size < e:
                buf = np.empty(e, dtype=np.int64)
            _rng.sample_distinct(state, size_l * size_r, e, buf, 0)
            for t in range(e):
                idx = buf[t]
                i = idx // size_r
                j = idx - i * size_r
                left[pos] = order_l[start_l[a] + i]
                right[pos] = order_r[start_r[b] + j]
                pos += 1
    return left, right


@nb.njit(cache=True)
def _random_intersection_kernel(wl, n_right, seed):
    total = 0
    for u in range(wl.size):
        total += wl[u]
    left = np.empty(total, dtype=np.int64)
    right = np.empty(total, dtype=np.int64)
    state = _rng.new_stream(seed, _RI_KEY, 0)
    pos = 0
    for u in range(wl.size):
        k = wl[u]
        _rng.sample_distinct(state, n_right, k, right, pos)
        for t in range(k):
            left[pos + t] = u
        pos += k
    return left, right


# --------------------------------------------------------------------------- public API


def weight_groups(weights):
    """Group node ids by integer weight.

    Returns ``(order, start, values)``: ``order[start[g]:start[g+1]]`` are the
    ids (ascending) whose weight is ``values[g]``.
    """
    w = np.asarray(weights, dtype=np.int64)
    order = np.argsort(w, kind="stable").astype(np.int64)
    values, counts = np.unique(w[order], return_counts=True)
    start = np.zeros(values.size + 1, dtype=np.int64)
    np.cumsum(counts, out=start[1:])
    return order, start, values.astype(np.int64)


def group_pairs(SL: WeightSequence, SR: WeightSequence):
    """Enumerate the :class:`GroupPair` objects the fast sampler iterates over."""
    order_l, start_l, val_l = weight_groups(SL.as_integers())
    order_r, start_r, val_r = weight_groups(SR.as_integers())
    total_right = SR.total()
    for a, wl in enumerate(val_l):
        for b, wr in enumerate(val_r):
            yield GroupPair(int(wl), int(wr), order_l[start_l[a]:start_l[a + 1]],
                            order_r[start_r[b]:start_r[b + 1]], total_right)


def _from_arrays(n_left, n_right, left, right):
    key = np.sort(left * np.int64(max(n_right, 1)) + right)
    edges = np.column_stack((key // max(n_right, 1), key % max(n_right, 1)))
    return BipartiteGraph(n_left, n_right, edges, check=False)


def sample_naive(SL: WeightSequence, SR: WeightSequence, seed=None, max_pairs=DEFAULT_MAX_PAIRS) -> BipartiteGraph:
    """Flip one coin per (left, right) pair with probability ``min(w_u w_v / sum(S_R), 1)``."""
    _check_sides(SL, SR)
    n_pairs = len(SL) * len(SR)
    if max_pairs is not None and n_pairs > max_pairs:
        raise SizeError(
            f"naive sampling needs {n_pairs:.3g} coin flips (guard {max_pairs:.3g}); use sample_fast"
        )
    wl = SL.values.astype(np.float64)
    wr = SR.values.astype(np.float64)
    left, right = _naive_kernel(wl, wr, SR.total(), np.uint64(_rng.as_seed(seed)))
    return _from_arrays(len(SL), len(SR), left, right)


def fast_sampler_inputs(SL: WeightSequence, SR: WeightSequence):
    """Arguments (minus the seed) passed to the compiled grouped-sampler kernel."""
    _check_sides(SL, SR)
    if not (SL.is_integral and SR.is_integral):
        raise ParameterError("sample_fast needs integer weights; use sample_naive for real-valued weights")
    order_l, start_l, val_l = weight_groups(SL.as_integers())
    order_r, start_r, val_r = weight_groups(SR.as_integers())
    return order_l, start_l, val_l, order_r, start_r, val_r, SR.total()


def sample_fast(SL: WeightSequence, SR: WeightSequence, seed=None) -> BipartiteGraph:
    """Grouped sampler: one exact binomial per weight-group pair, then distinct pairs.

    Has the same per-pair edge law as :func:`sample_naive` but costs
    O(#group pairs + #edges) instead of O(n_L n_R).
    """
    args = fast_sampler_inputs(SL, SR)
    left, right = _fast_kernel(*args, np.uint64(_rng.as_seed(seed)))
    return _from_arrays(len(SL), len(SR), left, right)


def sample_group_edges(group: GroupPair, seed=None):
    """Edges of one group pair as an ``(e, 2)`` array of (left id, right id).

    Uses the same substream as :func:`sample_fast` for this weight pair,
    so for equal seeds the result equals that group's slice of the graph.
    """
    size_l, size_r = len(group.members_left), len(group.members_right)
    count, state = _group_pair_count(np.uint64(_rng.as_seed(seed)), group.w_left, group.w_right,
                                     size_l, size_r, group.total_right)
    buf = np.empty(count, dtype=np.int64)
    _rng.sample_distinct(state, size_l * size_r, count, buf, 0)
    i, j = np.divmod(buf, max(size_r, 1))
    return np.column_stack((np.asarray(group.members_left)[i], np.asarray(group.members_right)[j])).astype(np.int64)


def sample_random_intersection(SL: WeightSequence, n_right: int, seed=None) -> BipartiteGraph:
    """Each left node ``u`` links to ``w_u`` distinct right nodes chosen uniformly."""
    if len(SL) == 0:
        raise ParameterError("left weight sequence must be nonempty")
    if not SL.is_integral:
        raise ParameterError("random intersection needs integer left degrees")
    wl = SL.as_integers()
    if n_right < 1:
        raise ParameterError("n_right must be >= 1")
    if wl.max() > n_right:
        raise ParameterError(f"left degree {wl.max()} exceeds n_right={n_right}")
    left, right = _random_intersection_kernel(wl, int(n_right), np.uint64(_rng.as_seed(seed)))
    return _from_arrays(len(SL), int(n_right), left, right)


def sample(SL, SR, sampler="fast", seed=None, max_pairs=DEFAULT_MAX_PAIRS):
    """Dispatch on sampler name: ``fast``, ``naive`` or ``random-intersection``."""
    if sampler == "fast":
        return sample_fast(SL, SR, seed)
    if sampler == "naive":
        return sample_naive(SL, SR, seed, max_pairs=max_pairs)
    if sampler in ("random-intersection", "ri"):
        return sample_random_intersection(SL, len(SR), seed)
    raise ParameterError(f"unknown sampler {sampler!r}")


def expected_edges(SL: WeightSequence, SR: WeightSequence):
    """Expected edge count, ``sum_u sum_v min(w_u w_v / sum(S_R), 1)``."""
    wl = np.sort(SL.values.astype(float))
    wr = SR.values.astype(float)
    total = SR.total()
    if float(wl[-1]) * float(wr.max()) <= total:
        return float(wl.sum())
    # capped pairs present: sum per right node over the sorted left weights
    cum = np.concatenate(([0.0], np.cumsum(wl)))
    out = 0.0
    for v in wr:
        k = np.searchsorted(wl, total / v, side="right")
        out += cum[k] * v / total + (wl.size - k)
    return float(out)


def write_bipartite_edgelist(graph: BipartiteGraph, path, header=None):
    """Write ``left right`` per line (0-indexed), with an optional ``#`` header."""
    with Path(path).open("w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"# n_left={graph.n_left} n_right={graph.n_right}\n")
        np.savetxt(fh, graph.edges, fmt="%d")


def read_bipartite_edgelist(path) -> BipartiteGraph:
    """Read a file written by :func:`write_bipartite_edgelist`."""
    n_left = n_right = None
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for tok in s[1:].split():
                    if tok.startswith("n_left="):
                        n_left = int(tok.split("=", 1)[1])
                    elif tok.startswith("n_right="):
                        n_right = int(tok.split("=", 1)[1])
                continue
            parts = s.split()
            if len(parts) != 2:
                raise ParseError(f"expected two columns, got {len(parts)}", lineno)
            try:
                rows.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ParseError(f"non-integer id in {s!r}", lineno) from None
    edges = np.array(rows, dtype=np.int64).reshape(-1, 2)
    if n_left is None:
        n_left = int(edges[:, 0].max()) + 1 if len(edges) else 0
    if n_right is None:
        n_right = int(edges[:, 1].max()) + 1 if len(edges) else 0
    return BipartiteGraph(n_left, n_right, edges)
