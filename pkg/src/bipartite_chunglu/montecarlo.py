"""Monte-Carlo estimators over repeated model samples, run entirely in compiled loops.

Each trial calls the same compiled sampler kernels as :mod:`.sampler`, with a
per-trial seed derived from the master seed.
"""
from __future__ import annotations

import numba as nb
import numpy as np

from . import _rng
from .exceptions import ParameterError
from .sampler import _check_sides, _fast_kernel, _naive_kernel, fast_sampler_inputs

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


@nb.njit(cache=True)
def trial_seed(seed, t):
    return _rng.mix64(np.uint64(seed) + np.uint64(t + 1) * _GOLDEN)


@nb.njit(cache=True)
def _draw(use_fast, wl, wr, total, order_l, start_l, val_l, order_r, start_r, val_r, seed):
    if use_fast:
        return _fast_kernel(order_l, start_l, val_l, order_r, start_r, val_r, total, seed)
    return _naive_kernel(wl, wr, total, seed)


@nb.njit(cache=True)
def _event_loop(use_fast, wl, wr, total, order_l, start_l, val_l, order_r, start_r, val_r, seed, trials):
    nl = wl.size
    nr = wr.size
    bip = np.zeros((nl, nr), dtype=np.int64)
    edge = np.zeros((nl, nl), dtype=np.int64)
    wedge = np.zeros((nl, nl, nl), dtype=np.int64)
    tri = np.zeros((nl, nl, nl), dtype=np.int64)
    inc = np.zeros((nl, nr), dtype=np.bool_)
    adj = np.zeros((nl, nl), dtype=np.bool_)
    for t in range(trials):
        left, right = _draw(use_fast, wl, wr, total, order_l, start_l, val_l, order_r, start_r, val_r,
                            trial_seed(seed, t))
        inc[:, :] = False
        for k in range(left.size):
            inc[left[k], right[k]] = True
            bip[left[k], right[k]] += 1
        adj[:, :] = False
        for a in range(nl):
            for b in range(a + 1, nl):
                for v in range(nr):
                    if inc[a, v] and inc[b, v]:
                        adj[a, b] = True
                        adj[b, a] = True
                        edge[a, b] += 1
                        edge[b, a] += 1
                        break
        for u in range(nl):
            for a in range(nl):
                if a == u or not adj[u, a]:
                    continue
                for b in range(nl):
                    if b == u or b == a or not adj[u, b]:
                        continue
                    wedge[u, a, b] += 1
                    if adj[a, b]:
                        tri[u, a, b] += 1
    return bip, edge, wedge, tri


class EventFrequencies:
    """Empirical frequencies from :func:`event_frequencies`.

    ``bipartite[u, v]``: edge ``(u, v)`` in the bipartite sample.
    ``edge[u1, u2]``: edge in the projection. ``wedge[u, u1, u2]``: wedge
    centred at ``u``. ``triangle[u, u1, u2]``: that wedge is closed.
    """

    def __init__(self, bip, edge, wedge, tri, trials):
        self.trials = trials
        self.bipartite = bip / trials
        self.edge = edge / trials
        self.wedge = wedge / trials
        self.triangle = tri / trials

    @staticmethod
    def standard_error(freq, trials):
        """Binomial standard error of a frequency (using the frequency itself)."""
        return np.sqrt(np.clip(freq * (1 - freq), 0, None) / trials)


def _kernel_args(SL, SR, sampler):
    _check_sides(SL, SR)
    wl = SL.values.astype(np.float64)
    wr = SR.values.astype(np.float64)
    if sampler == "fast":
        order_l, start_l, val_l, order_r, start_r, val_r, total = fast_sampler_inputs(SL, SR)
        return True, wl, wr, total, order_l, start_l, val_l, order_r, start_r, val_r
    if sampler == "naive":
        empty = np.zeros(1, dtype=np.int64)
        return False, wl, wr, SR.total(), empty, empty, empty, empty, empty, empty
    raise ParameterError(f"sampler must be 'naive' or 'fast', got {sampler!r}")


def event_frequencies(SL, SR, trials, seed=0, sampler="naive", max_left=12) -> EventFrequencies:
    """Per-pair bipartite, projected-edge, wedge and triangle frequencies on tiny instances."""
    if len(SL) > max_left or len(SR) > 64:
        raise ParameterError("event_frequencies is meant for tiny instances")
    args = _kernel_args(SL, SR, sampler)
    bip, edge, wedge, tri = _event_loop(*args, np.uint64(_rng.as_seed(seed)), np.int64(trials))
    return EventFrequencies(bip, edge, wedge, tri, trials)


@nb.njit(cache=True)
def _degree_loop(use_fast, wl, wr, total, order_l, start_l, val_l, order_r, start_r, val_r, seed, trials, nodes):
    out = np.zeros((trials, nodes.size), dtype=np.int64)
    deg = np.zeros(wl.size, dtype=np.int64)
    for t in range(trials):
        left, right = _draw(use_fast, wl, wr, total, order_l, start_l, val_l, order_r, start_r, val_r,
                            trial_seed(seed, t))
        deg[:] = 0
        for k in range(left.size):
            deg[left[k]] += 1
        for i in range(nodes.size):
            out[t, i] = deg[nodes[i]]
    return out


def left_degree_samples(SL, SR, nodes, trials, seed=0, sampler="fast"):
    """Bipartite degrees of the given left nodes over ``trials`` independent samples.

    Returns an array of shape ``(trials, len(nodes))``.
    """
    args = _kernel_args(SL, SR, sampler)
    nodes = np.asarray(nodes, dtype=np.int64)
    return _degree_loop(*args, np.uint64(_rng.as_seed(seed)), np.int64(trials), nodes)
