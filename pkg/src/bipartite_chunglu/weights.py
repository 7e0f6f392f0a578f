"""Node-weight sequences: power-law sampling, moments, assumption checks, text I/O."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DomainError, ParameterError

# discrete supports larger than this are sampled by rejection instead of a CDF table
_TABLE_LIMIT = 10_000_000


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class PowerLawParams:
    """Parameters of a (truncated) power law with density proportional to ``w**-alpha``.

    ``w_max=math.inf`` gives the untruncated law. With ``discrete=True`` the
    support is the integers in ``[w_min, w_max]`` (a Zipf law).
    """

    alpha: float
    w_min: float = 1.0
    w_max: float = math.inf
    discrete: bool = False

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= 1:
            raise ParameterError(f"alpha must be > 1, got {self.alpha}")
        if not np.isfinite(self.w_min) or self.w_min < 1:
            raise ParameterError(f"w_min must be >= 1, got {self.w_min}")
        if math.isnan(self.w_max) or self.w_max < self.w_min:
            raise ParameterError(f"w_max must be >= w_min, got {self.w_max} < {self.w_min}")
        if self.discrete and self.bounded and math.floor(self.w_max) < math.ceil(self.w_min):
            raise ParameterError("discrete support [w_min, w_max] contains no integer")

    @property
    def bounded(self):
        return math.isfinite(self.w_max)

    def support(self):
        """Integer support as an array (bounded discrete laws only)."""
        if not (self.discrete and self.bounded):
            raise ParameterError("support() needs a bounded discrete law")
        return np.arange(math.ceil(self.w_min), math.floor(self.w_max) + 1, dtype=np.int64)

    def pmf(self, k):
        """Probability mass at integer(s) ``k`` of the bounded discrete law."""
        ks = self.support()
        norm = np.sum(ks.astype(float) ** -self.alpha)
        k = np.asarray(k, dtype=float)
        inside = (k >= ks[0]) & (k <= ks[-1]) & (k == np.floor(k))
        return np.where(inside, np.maximum(k, 1.0) ** -self.alpha / norm, 0.0)

    def cdf(self, x):
        """CDF of the law evaluated at ``x``."""
        x = np.asarray(x, dtype=float)
        if self.discrete:
            k0 = math.ceil(self.w_min)
            if self.bounded:
                ks = self.support()
                cum = np.cumsum(ks.astype(float) ** -self.alpha)
                idx = np.floor(x).astype(np.int64) - k0
                out = np.where(idx < 0, 0.0, cum[np.clip(idx, 0, len(ks) - 1)] / cum[-1])
                return out
            from scipy.special import zeta

            total = zeta(self.alpha, k0)
            xf = np.floor(np.maximum(x, k0 - 1))
            return np.where(x < k0, 0.0, 1.0 - zeta(self.alpha, xf + 1) / total)
        a1 = 1.0 - self.alpha
        lo = self.w_min**a1
        hi = 0.0 if not self.bounded else self.w_max**a1
        xc = np.clip(x, self.w_min, self.w_max if self.bounded else np.inf)
        return (lo - xc**a1) / (lo - hi)

    def mean(self):
        """Analytic mean (infinite for ``alpha <= 2`` without truncation)."""
        if self.discrete:
            if self.bounded:
                ks = self.support().astype(float)
                wts = ks**-self.alpha
                return float(np.sum(ks * wts) / np.sum(wts))
            if self.alpha <= 2:
                return math.inf
            from scipy.special import zeta

            k0 = math.ceil(self.w_min)
            return float(zeta(self.alpha - 1, k0) / zeta(self.alpha, k0))
        a = self.alpha
        if not self.bounded:
            return math.inf if a <= 2 else (a - 1) / (a - 2) * self.w_min
        lo, hi = self.w_min, self.w_max
        num = math.log(hi / lo) if a == 2 else (lo ** (2 - a) - hi ** (2 - a)) / (a - 2)
        den = (lo ** (1 - a) - hi ** (1 - a)) / (a - 1)
        return num / den


class WeightSequence:
    """Immutable side-tagged sequence of positive node weights.

    Moments ``M_k = mean(w**k)`` are computed lazily and cached; the values
    array is read-only so the cache can never go stale.
    """

    __slots__ = ("side", "_values", "_moments", "params")

    def __init__(self, values, side=Side.LEFT, params=None):
        arr = np.array(values, copy=True)
        if arr.ndim != 1:
            raise ParameterError("weights must be one-dimensional")
        if arr.dtype.kind not in "iuf":
            raise ParameterError(f"weights must be numeric, got dtype {arr.dtype}")
        if arr.dtype.kind == "u":
            arr = arr.astype(np.int64)
        if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0)):
            raise ParameterError("weights must be finite and strictly positive")
        if params is not None and arr.size:
            lo, hi = arr.min(), arr.max()
            if lo < params.w_min or hi > params.w_max:
                raise ParameterError("weights fall outside [w_min, w_max] of their params")
        arr.setflags(write=False)
        self.side = Side(side)
        self._values = arr
        self._moments = {}
        self.params = params

    @property
    def values(self):
        return self._values

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(self._values.tolist())

    def __getitem__(self, idx):
        return self._values[idx]

    def __repr__(self):
        return f"WeightSequence(side={self.side.value}, n={len(self)}, max={self.max() if len(self) else None})"

    def __eq__(self, other):
        if not isinstance(other, WeightSequence):
            return NotImplemented
        return self.side == other.side and np.array_equal(self._values, other._values)

    __hash__ = None

    @property
    def is_integral(self):
        v = self._values
        return v.dtype.kind == "i" or bool(np.all(v == np.floor(v)))

    def as_integers(self):
        if not self.is_integral:
            raise ParameterError("weight sequence is not integer-valued")
        return self._values.astype(np.int64)

    def max(self):
        return self._values.max()

    def total(self):
        """Exact sum of the weights (``n * M_1``)."""
        if self._values.dtype.kind == "i":
            return float(int(self._values.sum()))
        return float(np.sum(self._values))

    def moment(self, k):
        return moments(self, k)

    def with_side(self, side):
        return WeightSequence(self._values, side=side, params=self.params)


def moments(seq: WeightSequence, k: int) -> float:
    """k-th power mean ``(1/n) * sum(w**k)``, cached on the sequence."""
    if k < 1 or int(k) != k:
        raise ParameterError(f"moment order must be a positive integer, got {k}")
    k = int(k)
    if len(seq) == 0:
        raise DomainError("moments of an empty weight sequence are undefined")
    cached = seq._moments.get(k)
    if cached is None:
        # pairwise summation keeps the relative error near 1e-16 * log2(n)
        v = seq.values.astype(float)
        cached = float(np.sum(v if k == 1 else v**k)) / v.size
        seq._moments[k] = cached
    return cached


def _discrete_table_sample(params, n, rng):
    ks = params.support()
    cum = np.cumsum(ks.astype(float) ** -params.alpha)
    cum /= cum[-1]
    u = rng.random(n)
    idx = np.searchsorted(cum, u, side="right")
    return ks[np.minimum(idx, ks.size - 1)]


def _discrete_rejection_sample(params, n, rng):
    # envelope: floor(Y) with Y Pareto on [k0, inf), pmf
    #   P_env(x) = (x**(1-a) - (x+1)**(1-a)) / k0**(1-a) >= (a-1) k0**(a-1) (x+1)**-a
    # so x**-a <= c * P_env(x) with c = (1 + 1/k0)**a / ((a-1) k0**(a-1))
    a = params.alpha
    k0 = math.ceil(params.w_min)
    c = (1.0 + 1.0 / k0) ** a / ((a - 1.0) * k0 ** (a - 1.0))
    accept_rate = (1.0 + 1.0 / k0) ** -a
    out = np.empty(n, dtype=np.int64)
    filled = 0
    while filled < n:
        need = n - filled
        batch = max(64, int(need * 1.2 / accept_rate))
        u = rng.random(batch)
        x = np.floor(k0 * (1.0 - u) ** (-1.0 / (a - 1.0)))
        ok = np.isfinite(x) & (x < 2.0**62)
        if params.bounded:
            ok &= x <= params.w_max
        x = x[ok]
        p_env = x ** (1.0 - a) * -np.expm1((1.0 - a) * np.log1p(1.0 / x)) * k0 ** (a - 1.0)
        accept = rng.random(x.size) * c * p_env <= x**-a
        x = x[accept].astype(np.int64)[:need]
        out[filled : filled + x.size] = x
        filled += x.size
    return out


def sample_power_law(params: PowerLawParams, n: int, seed=None, side=Side.LEFT) -> WeightSequence:
    """Draw ``n`` i.i.d. weights from the truncated power law ``params``.

    Continuous laws use the closed-form inverse CDF; bounded discrete laws a
    precomputed CDF table; unbounded (or very wide) discrete laws rejection
    from a rounded continuous envelope.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    a = params.alpha
    if params.discrete:
        width = params.w_max - params.w_min
        if params.bounded and width <= _TABLE_LIMIT:
            values = _discrete_table_sample(params, n, rng)
        else:
            values = _discrete_rejection_sample(params, n, rng)
    else:
        u = rng.random(n)
        lo = params.w_min ** (1.0 - a)
        hi = params.w_max ** (1.0 - a) if params.bounded else 0.0
        values = (lo - u * (lo - hi)) ** (1.0 / (1.0 - a))
        values = np.clip(values, params.w_min, params.w_max)
    return WeightSequence(values, side=side, params=params)


def cap(seq: WeightSequence, w_max: float) -> WeightSequence:
    """Clamp weights at ``w_max`` (the figure-protocol capping, not truncation)."""
    if w_max <= 0:
        raise ParameterError("cap must be positive")
    v = np.minimum(seq.values, w_max)
    if seq.values.dtype.kind == "i" and float(w_max).is_integer():
        v = v.astype(np.int64)
    return WeightSequence(v, side=seq.side)


def constant(value, n, side=Side.LEFT) -> WeightSequence:
    return WeightSequence(np.full(n, value), side=side)


@dataclass
class AssumptionReport:
    delta: float
    well_defined_probs: bool
    bounded_range: bool
    bounded_moments: bool
    details: dict = field(default_factory=dict)

    @property
    def all_passed(self):
        return self.well_defined_probs and self.bounded_range and self.bounded_moments

    def to_dict(self):
        return {
            "delta": self.delta,
            "well_defined_probs": self.well_defined_probs,
            "bounded_range": self.bounded_range,
            "bounded_moments": self.bounded_moments,
            "details": self.details,
        }


def check_assumptions(SL: WeightSequence, SR: WeightSequence, delta: float, slack: float = 10.0) -> AssumptionReport:
    """Finite-n surrogates of the weight-sequence assumptions.

    The asymptotic O(.) bounds are replaced by inequalities with
    multiplicative ``slack``; the well-defined-probability check is exact.
    """
    if not delta > 0:
        raise ParameterError(f"delta must be > 0, got {delta}")
    if len(SL) == 0 or len(SR) == 0:
        raise DomainError("both weight sequences must be nonempty")
    n_r = len(SR)
    max_l, max_r = float(SL.max()), float(SR.max())
    total_r = SR.total()
    range_bound = n_r ** (0.5 - delta)
    m_r1, m_r2, m_r4 = moments(SR, 1), moments(SR, 2), moments(SR, 4)
    m4_bound = slack * n_r ** (1 - 2 * delta)
    well_defined = max_l * max_r <= total_r
    bounded_range = max(max_l, max_r) <= range_bound
    bounded_moments = m_r2 <= slack * m_r1**2 and m_r4 <= m4_bound
    details = {
        "max_L*max_R <= n_R*M_R1": {"lhs": max_l * max_r, "rhs": total_r, "max_L": max_l, "max_R": max_r},
        "max(S_L, S_R) <= n_R^(1/2-delta)": {"lhs": max(max_l, max_r), "rhs": range_bound},
        "M_R2 <= c*M_R1^2": {"lhs": m_r2, "rhs": slack * m_r1**2},
        "M_R4 <= c*n_R^(1-2*delta)": {"lhs": m_r4, "rhs": m4_bound},
        "slack": slack,
    }
    return AssumptionReport(delta, bool(well_defined), bool(bounded_range), bool(bounded_moments), details)


def read_weights(path, side=Side.LEFT) -> WeightSequence:
    """Load one weight per line; ``#`` starts a comment line, blank lines are skipped."""
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                vals.append(float(s))
            except ValueError:
                from .exceptions import ParseError

                raise ParseError(f"not a number: {s!r}", lineno) from None
    arr = np.array(vals, dtype=float)
    if arr.size and np.all(arr == np.floor(arr)):
        arr = arr.astype(np.int64)
    return WeightSequence(arr, side=side)


def write_weights(seq: WeightSequence, path, header=None):
    path = Path(path)
    with path.open("w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        if seq.values.dtype.kind == "i":
            fh.writelines(f"{int(v)}\n" for v in seq.values)
        else:
            fh.writelines(f"{float(v)!r}\n" for v in seq.values)
