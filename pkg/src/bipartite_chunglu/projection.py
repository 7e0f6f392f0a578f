"""One-mode projection of a bipartite graph onto its left nodes."""
from __future__ import annotations

from pathlib import Path

import numba as nb
import numpy as np

from .exceptions import DomainError, ParameterError, ParseError, SizeError
from .sampler import BipartiteGraph

DEFAULT_MAX_WORK = 2 * 10**9


class ProjectedGraph:
    """Simple undirected graph on ``n`` nodes.

    ``edges`` holds each edge once as a sorted ``(u, v)`` row with ``u < v``;
    ``multiplicity`` (optional) is the number of common right neighbours of
    each edge's endpoints. Sorted CSR adjacency is built on first use.
    """

    __slots__ = ("n", "_edges", "_mult", "_indptr", "_indices")

    def __init__(self, n, edges=None, multiplicity=None, *, check=True):
        self.n = int(n)
        e = np.zeros((0, 2), dtype=np.int64) if edges is None else np.asarray(edges, dtype=np.int64)
        if e.size == 0:
            e = np.zeros((0, 2), dtype=np.int64)
        mult = None if multiplicity is None else np.asarray(multiplicity, dtype=np.int64)
        if check:
            if e.ndim != 2 or e.shape[1] != 2:
                raise ParameterError("edges must have shape (m, 2)")
            if e.size and (e.min() < 0 or e.max() >= self.n):
                raise ParameterError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ParameterError("self-loops are not allowed")
            lo = np.minimum(e[:, 0], e[:, 1])
            hi = np.maximum(e[:, 0], e[:, 1])
            key = lo * np.int64(max(self.n, 1)) + hi
            if mult is not None:
                if mult.shape != (e.shape[0],):
                    raise ParameterError("multiplicity must align with edges")
                order = np.argsort(key, kind="stable")
                key = key[order]
                mult = mult[order]
                # duplicate rows merge by summing their multiplicities
                key, first = np.unique(key, return_index=True)
                mult = np.add.reduceat(mult, first) if mult.size else mult
                if np.any(mult < 1):
                    raise ParameterError("multiplicities must be >= 1")
            else:
                key = np.unique(key)
            e = np.column_stack((key // max(self.n, 1), key % max(self.n, 1)))
        e = np.ascontiguousarray(e, dtype=np.int64)
        e.setflags(write=False)
        self._edges = e
        self._mult = mult
        self._indptr = None
        self._indices = None

    @property
    def edges(self):
        return self._edges

    @property
    def multiplicity(self):
        return self._mult

    @property
    def n_edges(self):
        return self._edges.shape[0]

    def _build_csr(self):
        e = self._edges
        src = np.concatenate((e[:, 0], e[:, 1]))
        dst = np.concatenate((e[:, 1], e[:, 0]))
        order = np.lexsort((dst, src))
        self._indices = dst[order]
        self._indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=self._indptr[1:])

    @property
    def indptr(self):
        if self._indptr is None:
            self._build_csr()
        return self._indptr

    @property
    def indices(self):
        if self._indices is None:
            self._build_csr()
        return self._indices

    def neighbors(self, u):
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degrees(self):
        return np.diff(self.indptr)

    def edge_set(self):
        return set(map(tuple, self._edges.tolist()))

    def __eq__(self, other):
        if not isinstance(other, ProjectedGraph):
            return NotImplemented
        if self.n != other.n or not np.array_equal(self._edges, other._edges):
            return False
        if (self._mult is None) != (other._mult is None):
            return False
        return self._mult is None or np.array_equal(self._mult, other._mult)

    __hash__ = None

    def __repr__(self):
        return f"ProjectedGraph(n={self.n}, n_edges={self.n_edges})"

    @classmethod
    def from_edges(cls, n, edges):
        return cls(n, edges)


@nb.njit(cache=True)
def _pair_keys(indptr, members, n_left, total):
    keys = np.empty(total, dtype=np.int64)
    pos = 0
    for v in range(indptr.size - 1):
        lo = indptr[v]
        hi = indptr[v + 1]
        for i in range(lo, hi):
            a = members[i]
            base = a * n_left
            for j in range(i + 1, hi):
                keys[pos] = base + members[j]
                pos += 1
    return keys


def projection_work(G_b: BipartiteGraph) -> int:
    """Number of candidate pairs ``sum_v d_b(v) (d_b(v) - 1) / 2`` the projection enumerates."""
    d = G_b.right_degrees().astype(np.int64)
    return int(np.sum(d * (d - 1) // 2))


def project(G_b: BipartiteGraph, keep_multiplicity: bool = False, max_work=DEFAULT_MAX_WORK) -> ProjectedGraph:
    """Link every pair of left nodes that share a right neighbour.

    Pairs are enumerated per right node (ids ascending, so each pair is
    emitted as ``(min, max)``), then sorted and deduplicated; the run length
    of each key is its common-neighbour count.
    """
    work = projection_work(G_b)
    if max_work is not None and work > max_work:
        raise SizeError(f"projection would enumerate {work:.3g} pairs (guard {max_work:.3g})")
    e = G_b.edges
    # stable sort by right id keeps left ids ascending within each right node
    order = np.argsort(e[:, 1], kind="stable")
    members = np.ascontiguousarray(e[order, 0])
    indptr = np.zeros(G_b.n_right + 1, dtype=np.int64)
    np.cumsum(G_b.right_degrees(), out=indptr[1:])
    n = G_b.n_left
    keys = _pair_keys(indptr, members, np.int64(max(n, 1)), np.int64(work))
    if keep_multiplicity:
        keys, counts = np.unique(keys, return_counts=True)
        mult = counts.astype(np.int64)
    else:
        keys = np.unique(keys)
        mult = None
    edges = np.column_stack((keys // max(n, 1), keys % max(n, 1))).astype(np.int64)
    return ProjectedGraph(n, edges, mult, check=False)


def multi_edge_rate(P: ProjectedGraph) -> float:
    """Fraction of projected edges whose endpoints share at least two right neighbours."""
    if P.multiplicity is None:
        raise DomainError("multiplicities were not kept; project with keep_multiplicity=True")
    if P.n_edges == 0:
        return 0.0
    return float(np.mean(P.multiplicity >= 2))


def write_projected_edgelist(P: ProjectedGraph, path, header=None, with_multiplicity=True):
    """Write ``u v`` (``u < v``) per line; adds a third multiplicity column when available."""
    with Path(path).open("w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"# n={P.n}\n")
        if with_multiplicity and P.multiplicity is not None:
            np.savetxt(fh, np.column_stack((P.edges, P.multiplicity)), fmt="%d")
        else:
            np.savetxt(fh, P.edges, fmt="%d")


def read_projected_edgelist(path) -> ProjectedGraph:
    n = None
    rows = []
    mults = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for tok in s[1:].split():
                    if tok.startswith("n="):
                        n = int(tok[2:])
                continue
            parts = s.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"expected 2 or 3 columns, got {len(parts)}", lineno)
            try:
                vals = [int(x) for x in parts]
            except ValueError:
                raise ParseError(f"non-integer field in {s!r}", lineno) from None
            rows.append(vals[:2])
            if len(vals) == 3:
                mults.append(vals[2])
    if mults and len(mults) != len(rows):
        raise ParseError("multiplicity column present on some lines only")
    edges = np.array(rows, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(edges.max()) + 1 if edges.size else 0
    return ProjectedGraph(n, edges, np.array(mults, dtype=np.int64) if mults else None)
