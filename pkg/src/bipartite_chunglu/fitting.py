"""Discrete power-law fitting: maximum likelihood exponent with KS-selected lower cutoff."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .exceptions import FitError

MIN_SAMPLES = 50
MIN_TAIL = 10
ALPHA_BOUNDS = (1.0 + 1e-6, 20.0)


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    x_min: int
    stderr: float
    ks_distance: float
    n_tail: int

    def to_dict(self):
        return asdict(self)


def _mle_alpha(x_min, n_tail, sum_log):
    def nll(a):
        return n_tail * np.log(zeta(a, x_min)) + a * sum_log

    res = minimize_scalar(nll, bounds=ALPHA_BOUNDS, method="bounded", options={"xatol": 1e-7})
    return float(res.x)


def _ks(values, counts, alpha, x_min):
    # tail values are integers >= x_min; both CDFs step at integers, so the
    # supremum is attained at an observed value or just before one
    n = counts.sum()
    emp = np.cumsum(counts) / n
    norm = zeta(alpha, x_min)
    fit = 1.0 - zeta(alpha, values + 1.0) / norm
    before = 1.0 - zeta(alpha, values.astype(float)) / norm
    emp_before = np.concatenate(([0.0], emp[:-1]))
    return float(max(np.max(np.abs(emp - fit)), np.max(np.abs(emp_before - before))))


def fit_tail(samples, x_min) -> PowerLawFit:
    """Discrete MLE fit of ``samples >= x_min`` with a fixed cutoff."""
    x = np.asarray(samples)
    tail = x[x >= x_min]
    if tail.size < MIN_TAIL:
        raise FitError(f"only {tail.size} samples at or above x_min={x_min}")
    values, counts = np.unique(tail, return_counts=True)
    alpha = _mle_alpha(x_min, tail.size, float(np.sum(counts * np.log(values))))
    return PowerLawFit(alpha, int(x_min), float((alpha - 1.0) / np.sqrt(tail.size)), _ks(values, counts, alpha, x_min), int(tail.size))


def fit_power_law(samples, x_min=None, max_quantile=0.9) -> PowerLawFit:
    """Fit ``P(k) ~ k**-alpha`` to positive integer samples.

    Without an explicit ``x_min``, every observed value up to the
    ``max_quantile`` quantile is tried and the cutoff giving the smallest KS
    distance between the fitted and empirical tail CDFs wins.
    """
    x = np.asarray(samples)
    if x.ndim != 1:
        raise FitError("samples must be one-dimensional")
    if x.size and np.any(x != np.floor(x)):
        raise FitError("samples must be integers")
    x = x[x >= 1].astype(np.int64)
    if x.size < MIN_SAMPLES:
        raise FitError(f"need at least {MIN_SAMPLES} samples >= 1, got {x.size}")
    values, counts = np.unique(x, return_counts=True)
    if values.size < 2:
        raise FitError("all samples are equal; no tail to fit")
    if x_min is not None:
        return fit_tail(x, x_min)

    logs = counts * np.log(values)
    # suffix sums give tail size and sum(log x) for every candidate cutoff
    tail_n = np.cumsum(counts[::-1])[::-1]
    tail_log = np.cumsum(logs[::-1])[::-1]
    limit = np.quantile(x, max_quantile)
    best = None
    for i, xm in enumerate(values):
        if xm > limit and best is not None:
            break
        if tail_n[i] < MIN_TAIL or i == values.size - 1:
            break
        alpha = _mle_alpha(int(xm), int(tail_n[i]), float(tail_log[i]))
        d = _ks(values[i:], counts[i:], alpha, int(xm))
        if best is None or d < best.ks_distance:
            best = PowerLawFit(alpha, int(xm), float((alpha - 1.0) / np.sqrt(tail_n[i])), d, int(tail_n[i]))
    if best is None:
        raise FitError("no admissible x_min candidate")
    return best
