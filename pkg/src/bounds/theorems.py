"""
Closed-form threshold expressions for Q_n and the size condition for
general d-regular graphs.
"""

import logging
import math
from dataclasses import dataclass

from src.core.exceptions import BoundDomainError
from src.core.models import SphereNeighborProfile
from src.graphs.geometry import torus_profile

logger = logging.getLogger(__name__)


def sharp_threshold_p(n: int, lam: float) -> float:
    """p(λ) = 1/2 - ½√(log n / n) + λ·log log n / √(n log n)."""
    if n < 16:
        raise BoundDomainError(f"threshold expression needs n >= 16, got {n}")
    log_n = math.log(n)
    return 0.5 - 0.5 * math.sqrt(log_n / n) + lam * math.log(log_n) / math.sqrt(n * log_n)


@dataclass
class Theorem1Bounds:
    """Explicit parts of the lower and upper threshold bounds for majority percolation on Q_n.

    The upper expression omits its o(log log n / √(n log n)) term.
    """

    n: int
    lambda_lo: float
    lambda_hi: float
    p_lower: float
    p_upper: float

    def p_at(self, lam: float) -> float:
        return sharp_threshold_p(self.n, lam)


def theorem1_bounds(n: int, lambda_lo: float = -2.0, lambda_hi: float = 0.5) -> Theorem1Bounds:
    return Theorem1Bounds(
        n=n,
        lambda_lo=lambda_lo,
        lambda_hi=lambda_hi,
        p_lower=sharp_threshold_p(n, lambda_lo),
        p_upper=sharp_threshold_p(n, lambda_hi),
    )


@dataclass
class DregConditionReport:
    """Comparison of log N against d^k / ((ωk)^k (f_{k-1}+f_k) Π f_i), all in log space."""

    log_n: float
    log_bound_exponent: float
    size_ok: bool
    size_margin: float
    max_f: int
    smallness_limit: float
    smallness_ok: bool

    @property
    def ok(self) -> bool:
        return self.size_ok and self.smallness_ok


def dreg_condition_check(
    d: int, k: int, num_vertices: int, profile: SphereNeighborProfile, omega: float
) -> DregConditionReport:
    """
    Check N <= exp(d^k / ((ωk)^k (f_{k-1} + f_k) Π_{i<k} f_i)) and f_i <= d / (k log d).

    ``size_margin`` is log(bound exponent) - log(log N), infinite when N = 1.

    Raises:
        BoundDomainError: If the profile stops short of radius k or parameters are out of range
    """
    if d < 2 or k < 1 or num_vertices < 1 or omega <= 0:
        raise BoundDomainError(
            f"need d >= 2, k >= 1, N >= 1 and omega > 0, got d={d}, k={k}, N={num_vertices}, "
            f"omega={omega}"
        )
    if profile.k < k:
        raise BoundDomainError(f"profile covers radii up to {profile.k}, need {k}")

    log_exponent = (
        k * math.log(d)
        - k * math.log(omega * k)
        - math.log(profile.f_at(k - 1) + profile.f_at(k))
        - sum(math.log(profile.f_at(i)) for i in range(1, k))
    )
    log_n = math.log(num_vertices)
    if log_n == 0.0:
        size_ok, margin = True, math.inf
    else:
        margin = log_exponent - math.log(log_n)
        size_ok = margin >= 0.0

    max_f = max(profile.f_at(i) for i in range(1, k + 1))
    limit = d / (k * math.log(d))
    report = DregConditionReport(
        log_n=log_n,
        log_bound_exponent=log_exponent,
        size_ok=size_ok,
        size_margin=margin,
        max_f=max_f,
        smallness_limit=limit,
        smallness_ok=max_f <= limit,
    )
    logger.debug(f"d-regular condition d={d} k={k}: {report}")
    return report


def torus_condition(n: int, dims: int, k: int, omega: float) -> DregConditionReport:
    """The d-regular condition on [n]^dims with the closed-form profile f_i = i + 1."""
    if n < 3:
        raise BoundDomainError(f"torus condition needs n >= 3, got {n}")
    return dreg_condition_check(2 * dims, k, n**dims, torus_profile(k, f"torus:{n}^{dims}"), omega)
