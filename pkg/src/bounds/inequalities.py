"""
Concentration inequalities with precondition flags.

Every function returns a BoundResult carrying the raw formula value (never
clamped), its logarithm and a named flag per precondition. A bound is only
claimed to hold when all flags are true.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy.stats import binom

from src.core.config import get_settings
from src.core.exceptions import BoundDomainError
from src.core.models import BoundResult, WeightedBinomialSpec


def chernoff_upper(n: int, p: float, t: float, side: str = "upper") -> BoundResult:
    """
    P(S >= np + t) <= exp(-2t²/n), and the same bound for P(S <= np - t).
    """
    if n < 1:
        raise BoundDomainError(f"n must be >= 1, got {n}")
    if side not in ("upper", "lower"):
        raise BoundDomainError(f"side must be 'upper' or 'lower', got {side!r}")
    exponent = -2.0 * t * t / n
    threshold = n * p + t if side == "upper" else n * p - t
    return BoundResult(
        name="chernoff",
        value=math.exp(exponent),
        log_value=exponent,
        direction="upper",
        preconditions={"t_nonnegative": t >= 0, "p_in_open_unit": 0.0 < p < 1.0},
        params={"n": n, "p": p, "t": t},
        details={"threshold": threshold, "lower_tail": float(side == "lower")},
    )


def reverse_chernoff_lower(
    n: int, delta: float, c: float = 0.0, n_min: Optional[int] = None
) -> BoundResult:
    """
    P(S >= n/2 + C) >= exp(-2δ²n - 4δ√(n/log n) - (log log n)/2 - 6)
    for S ~ Bin(n, 1/2 - δ), in the regime 0 <= 8δ⁴n <= 1 and n >= n_min.

    The right-hand side does not depend on C.
    """
    if n < 3:
        raise BoundDomainError(f"log log n needs n >= 3, got {n}")
    if not 0.0 <= delta < 0.5:
        raise BoundDomainError(f"delta must lie in [0, 1/2), got {delta}")
    floor = get_settings().chernoff_n_min if n_min is None else n_min
    log_n = math.log(n)
    exponent = (
        -2.0 * delta * delta * n
        - 4.0 * delta * math.sqrt(n / log_n)
        - 0.5 * math.log(log_n)
        - 6.0
    )
    return BoundResult(
        name="reverse_chernoff",
        value=math.exp(exponent),
        log_value=exponent,
        direction="lower",
        preconditions={
            "delta_regime": 0.0 <= 8.0 * delta**4 * n <= 1.0,
            "n_at_least_n_min": n >= floor,
            "c_nonnegative": c >= 0,
        },
        params={"n": n, "delta": delta, "c": c},
        details={"p": 0.5 - delta, "threshold": n / 2.0 + c, "n_min": floor},
    )


def weighted_tail_upper(spec: WeightedBinomialSpec, t: int) -> BoundResult:
    """
    P(Y_k >= E Y_k + t) <= (2t)^(k-1) exp(-2t²/D(k)), Y_k = sum i·X_i, D(k) = sum i²·d_i.

    With k = 1 this is exactly ``chernoff_upper(d_1, p, t)``.
    """
    spread = spec.spread
    if spread == 0:
        raise BoundDomainError("all layer sizes are zero")
    k = spec.k
    value = (2 * t) ** (k - 1) * math.exp(-2.0 * t * t / spread)
    return BoundResult(
        name="layer4",
        value=value,
        log_value=(k - 1) * math.log(2 * t) - 2.0 * t * t / spread if t > 0 else None,
        direction="upper",
        preconditions={"t_positive_integer": int(t) == t and t >= 1, "k_positive": k >= 1},
        params={"k": k, "p": spec.p, "t": t},
        details={"mean": spec.mean, "spread": spread},
    )


def small_p_tail_upper(n: int, p: float, m: int) -> BoundResult:
    """P(S >= m) <= 2p^(m/2) for S ~ Bin(n, p) with pn² <= 1."""
    if n < 1 or not 0.0 < p < 1.0:
        raise BoundDomainError(f"need n >= 1 and 0 < p < 1, got n={n}, p={p}")
    return BoundResult(
        name="small_p",
        value=2.0 * p ** (m / 2.0),
        log_value=math.log(2.0) + (m / 2.0) * math.log(p),
        direction="upper",
        preconditions={"pn2_at_most_one": p * n * n <= 1.0, "m_in_range": 0 <= m <= n},
        params={"n": n, "p": p, "m": m},
    )


def central_binomial_lower(n: int, m: int) -> BoundResult:
    """C(n, n/2 + m) >= 2^(n-1)/√(πn) · exp(-2m²/n - 1), for even n, 8m <= n, 4m³ <= n²."""
    if n < 2 or m < 0:
        raise BoundDomainError(f"need n >= 2 and m >= 0, got n={n}, m={m}")
    log_value = (n - 1) * math.log(2.0) - 0.5 * math.log(math.pi * n) - 2.0 * m * m / n - 1.0
    return BoundResult(
        name="central_binomial",
        value=math.exp(log_value),
        log_value=log_value,
        direction="lower",
        preconditions={
            "n_even": n % 2 == 0,
            "eight_m_at_most_n": 8 * m <= n,
            "four_m_cubed_at_most_n_squared": 4 * m**3 <= n * n,
        },
        params={"n": n, "m": m},
    )


# ============= Oracles for the weighted tail =============


def weighted_pmf(spec: WeightedBinomialSpec) -> np.ndarray:
    """Exact distribution of Y_k on 0..sum i·d_i by convolving scaled binomials."""
    pmf = np.ones(1)
    for i, d in enumerate(spec.layer_sizes, start=1):
        layer = np.zeros(i * d + 1)
        layer[::i] = binom.pmf(np.arange(d + 1), d, spec.p)
        pmf = np.convolve(pmf, layer)
    return pmf


def weighted_tail_exact(spec: WeightedBinomialSpec, t: float) -> float:
    """P(Y_k >= E Y_k + t)."""
    pmf = weighted_pmf(spec)
    first = math.ceil(spec.mean + t - 1e-9)
    if first >= len(pmf):
        return 0.0
    return float(math.fsum(pmf[max(first, 0) :]))


def weighted_tail_mc(
    spec: WeightedBinomialSpec, t: float, samples: int, seed: int
) -> Tuple[float, float]:
    """
    Monte Carlo estimate of P(Y_k >= E Y_k + t).

    Returns:
        (fraction, standard error)
    """
    rng = np.random.default_rng(seed)
    y = np.zeros(samples, dtype=np.int64)
    for i, d in enumerate(spec.layer_sizes, start=1):
        y += i * rng.binomial(d, spec.p, size=samples)
    frac = float(np.mean(y >= spec.mean + t - 1e-9))
    return frac, math.sqrt(frac * (1.0 - frac) / samples)
