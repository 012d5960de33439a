"""
Exact binomial tails in log space.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import binom

from src.core.exceptions import BoundDomainError

MAX_N = 10**6


def _check(n: int, p: float) -> None:
    if not 0 <= n <= MAX_N:
        raise BoundDomainError(f"n must lie in [0, {MAX_N}], got {n}")
    if not 0.0 <= p <= 1.0:
        raise BoundDomainError(f"p must lie in [0, 1], got {p}")


def _log_mass(n: int, p: float, lo: int, hi: int) -> float:
    """log P(lo <= Bin(n,p) <= hi)."""
    lo, hi = max(lo, 0), min(hi, n)
    if lo > hi:
        return -math.inf
    if p == 0.0:
        return 0.0 if lo == 0 else -math.inf
    if p == 1.0:
        return 0.0 if hi == n else -math.inf
    ks = np.arange(lo, hi + 1)
    return float(logsumexp(binom.logpmf(ks, n, p)))


def log_binomial_tail(n: int, p: float, m: int) -> float:
    """log P(Bin(n,p) >= m)."""
    _check(n, p)
    if m <= 0:
        return 0.0
    if m > n:
        return -math.inf
    upper = _log_mass(n, p, m, n)
    lower = _log_mass(n, p, 0, m - 1)
    if upper <= lower:
        return upper
    # upper side dominates: take the complement of the smaller side
    return math.log1p(-math.exp(lower)) if lower > -math.inf else 0.0


def exact_binomial_tail(n: int, p: float, m: int) -> float:
    """
    P(Bin(n,p) >= m), summing the smaller side in log space.

    Raises:
        BoundDomainError: If n or p is out of range
    """
    _check(n, p)
    if m <= 0:
        return 1.0
    if m > n:
        return 0.0
    upper = _log_mass(n, p, m, n)
    lower = _log_mass(n, p, 0, m - 1)
    if upper <= lower:
        return math.exp(upper)
    return 1.0 - math.exp(lower)


def binomial_cdf(n: int, p: float, m: int) -> float:
    """P(Bin(n,p) <= m)."""
    _check(n, p)
    if m < 0:
        return 0.0
    if m >= n:
        return 1.0
    lower = _log_mass(n, p, 0, m)
    upper = _log_mass(n, p, m + 1, n)
    if lower <= upper:
        return math.exp(lower)
    return 1.0 - math.exp(upper)


@dataclass
class MedianCheck:
    """P(S <= ⌊np⌋ - 1) <= 1/2 <= P(S <= ⌈np⌉)."""

    n: int
    p: float
    below: float
    above: float

    @property
    def holds(self) -> bool:
        return self.below <= 0.5 <= self.above


def median_check(n: int, p: float) -> MedianCheck:
    mean = round(n * p, 9)
    below = binomial_cdf(n, p, math.floor(mean) - 1)
    above = binomial_cdf(n, p, math.ceil(mean))
    return MedianCheck(n=n, p=p, below=below, above=above)
