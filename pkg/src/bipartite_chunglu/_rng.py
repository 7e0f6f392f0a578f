"""Counter-seeded random streams and exact discrete samplers for numba kernels.

Every kernel owns its stream as a one-element ``uint64`` array holding a
SplitMix64 state. Streams are derived from a master seed plus integer keys,
so that independent units of work (e.g. weight-group pairs) get
reproducible, non-overlapping randomness no matter the execution order.
"""
import math

import numba as nb
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0

# Stirling-series remainder log(k!) - [(k+1/2)log(k+1) - (k+1) + log(2 pi)/2]
_FC_TABLE = np.array(
    [
        math.lgamma(k + 1.0) - ((k + 0.5) * math.log(k + 1.0) - (k + 1.0) + 0.5 * math.log(2.0 * math.pi))
        for k in range(10)
    ]
)

# below this mean (after folding p <= 1/2) the binomial is drawn by inversion
BINOMIAL_INVERSION_MEAN = 10.0


@nb.njit(cache=True)
def mix64(z):
    z = np.uint64(z)
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def new_stream(seed, key1, key2):
    """Return a stream state keyed by ``(seed, key1, key2)``."""
    h = mix64(np.uint64(seed) + _GOLDEN)
    h = mix64(h ^ (np.uint64(key1) * _MIX1 + _GOLDEN))
    h = mix64(h ^ (np.uint64(key2) * _MIX2 + _GOLDEN))
    state = np.empty(1, dtype=np.uint64)
    state[0] = h
    return state


@nb.njit(cache=True)
def next_u64(state):
    state[0] += _GOLDEN
    return mix64(state[0])


@nb.njit(cache=True)
def uniform(state):
    """Uniform double in [0, 1) with 53 random bits."""
    return np.float64(next_u64(state) >> _S11) * _INV53


@nb.njit(cache=True)
def randbelow(state, bound):
    """Uniform integer in [0, bound) without modulo bias; bound >= 1."""
    b = np.uint64(bound)
    # 2**64 mod b; draws below it are rejected so the accepted range is a multiple of b
    threshold = (~b + _ONE) % b
    while True:
        r = next_u64(state)
        if r >= threshold:
            return np.int64(r % b)


@nb.njit(cache=True)
def _stirling_tail(k):
    if k < 10:
        return _FC_TABLE[np.int64(k)]
    kp1 = k + 1.0
    kp1sq = kp1 * kp1
    return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / 1260.0 / kp1sq) / kp1sq) / kp1


@nb.njit(cache=True)
def _binomial_inversion(state, n, p):
    q = 1.0 - p
    qn = math.exp(n * math.log1p(-p))
    r = p / q
    while True:
        u = uniform(state)
        x = 0
        f = qn
        while True:
            if u < f:
                return x
            u -= f
            x += 1
            if x > n:
                break
            f *= r * (n - x + 1) / x
            if f == 0.0:
                break
        # the residual u exceeded the summed mass by rounding only; redraw


@nb.njit(cache=True)
def _binomial_btrs(state, n, p):
    # Hormann's transformed rejection with squeeze; valid for n*p >= 10, p <= 1/2
    q = 1.0 - p
    spq = math.sqrt(n * p * q)
    b = 1.15 + 2.53 * spq
    a = -0.0873 + 0.0248 * b + 0.01 * p
    c = n * p + 0.5
    v_r = 0.92 - 4.2 / b
    r = p / q
    alpha = (2.83 + 5.1 / b) * spq
    m = math.floor((n + 1) * p)
    log_mode_term = (m + 0.5) * math.log((m + 1.0) / (r * (n - m + 1.0)))
    mode_tails = _stirling_tail(m) + _stirling_tail(n - m)
    while True:
        u = uniform(state) - 0.5
        v = uniform(state)
        us = 0.5 - abs(u)
        if us <= 0.0:
            continue
        k = math.floor((2.0 * a / us + b) * u + c)
        if k < 0 or k > n:
            continue
        if us >= 0.07 and v <= v_r:
            return np.int64(k)
        v = math.log(v * alpha / (a / (us * us) + b))
        bound = (
            log_mode_term
            + (n + 1.0) * math.log1p((k - m) / (n - k + 1.0))
            + (k + 0.5) * math.log(r * (n - k + 1.0) / (k + 1.0))
            + mode_tails
            - _stirling_tail(k)
            - _stirling_tail(n - k)
        )
        if v <= bound:
            return np.int64(k)


@nb.njit(cache=True)
def binomial(state, n, p):
    """Exact Binomial(n, p) draw; ``p`` is clipped to [0, 1]."""
    if n <= 0 or p <= 0.0:
        return np.int64(0)
    if p >= 1.0:
        return np.int64(n)
    flipped = p > 0.5
    pp = 1.0 - p if flipped else p
    if n * pp < BINOMIAL_INVERSION_MEAN:
        k = _binomial_inversion(state, n, pp)
    else:
        k = _binomial_btrs(state, n, pp)
    if flipped:
        return np.int64(n - k)
    return np.int64(k)


@nb.njit(cache=True)
def sample_distinct(state, m, k, out, start):
    """Write ``k`` distinct uniform indices from ``range(m)`` to ``out[start:start+k]``.

    Dense requests (``2k > m``) use a partial Fisher-Yates shuffle of the
    materialised range; sparse ones use Floyd's algorithm over an
    open-addressing set, so memory and time stay O(k).
    """
    if k <= 0:
        return
    if 2 * k > m:
        idx = np.arange(m, dtype=np.int64)
        for i in range(k):
            j = i + randbelow(state, m - i)
            tmp = idx[i]
            idx[i] = idx[j]
            idx[j] = tmp
            out[start + i] = idx[i]
        return
    cap = 1
    while cap < 2 * k:
        cap <<= 1
    mask = np.uint64(cap - 1)
    table = np.full(cap, -1, dtype=np.int64)
    pos = start
    for j in range(m - k, m):
        t = randbelow(state, j + 1)
        # insert t; if already taken, j is new by construction
        slot = np.int64(mix64(t) & mask)
        found = False
        while table[slot] != -1:
            if table[slot] == t:
                found = True
                break
            slot = (slot + 1) & (cap - 1)
        if found:
            t = j
            slot = np.int64(mix64(t) & mask)
            while table[slot] != -1:
                slot = (slot + 1) & (cap - 1)
        table[slot] = t
        out[pos] = t
        pos += 1


def as_seed(seed):
    """Normalise an int / None / numpy Generator / RandomState into a uint64 seed."""
    if seed is None:
        return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(0, 2**63))
    if isinstance(seed, np.random.RandomState):
        return int(seed.randint(0, 2**31 - 1))
    if isinstance(seed, (int, np.integer)):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        return int(seed) % 2**64
    raise TypeError(f"cannot use {type(seed).__name__} as a seed")
