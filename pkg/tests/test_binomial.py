"""
Unit tests for exact binomial tails.
"""

import math

import pytest

from src.bounds.binomial import (
    binomial_cdf,
    exact_binomial_tail,
    log_binomial_tail,
    median_check,
)
from src.core.exceptions import BoundDomainError


def test_tail_known_value():
    """Test P(Bin(100, 1/2) >= 60)."""
    assert exact_binomial_tail(100, 0.5, 60) == pytest.approx(0.028444, abs=1e-6)


def test_cdf_known_values():
    """Test the Bin(10, 0.3) distribution function."""
    assert binomial_cdf(10, 0.3, 2) == pytest.approx(0.3828, abs=1e-4)
    assert binomial_cdf(10, 0.3, 3) == pytest.approx(0.6496, abs=1e-4)
    assert binomial_cdf(10, 0.3, -1) == 0.0
    assert binomial_cdf(10, 0.3, 10) == 1.0


def test_tail_and_cdf_are_complements():
    """Test P(S >= m) + P(S <= m-1) = 1 on either side of the mean."""
    for m in (1, 3, 5, 8):
        assert exact_binomial_tail(12, 0.4, m) + binomial_cdf(12, 0.4, m - 1) == pytest.approx(1.0)


def test_tail_edges():
    """Test trivial thresholds and degenerate p."""
    assert exact_binomial_tail(10, 0.3, 0) == 1.0
    assert exact_binomial_tail(10, 0.3, 11) == 0.0
    assert exact_binomial_tail(10, 0.0, 1) == 0.0
    assert exact_binomial_tail(10, 1.0, 10) == 1.0


def test_log_tail_far_in_the_tail():
    """Test the log tail stays finite where the tail underflows."""
    log_tail = log_binomial_tail(10**6, 0.5, 600000)
    assert math.isfinite(log_tail)
    assert log_tail < -1000
    assert log_binomial_tail(100, 0.5, 60) == pytest.approx(math.log(0.028444), abs=1e-4)
    assert log_binomial_tail(100, 0.5, 0) == 0.0
    assert log_binomial_tail(100, 0.5, 101) == -math.inf


def test_domain_errors():
    """Test out-of-range n and p."""
    with pytest.raises(BoundDomainError):
        exact_binomial_tail(10**6 + 1, 0.5, 3)
    with pytest.raises(BoundDomainError):
        binomial_cdf(10, 1.2, 3)


@pytest.mark.parametrize("n", [1, 2, 7, 10, 31, 100])
@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.77])
def test_median_sandwich(n, p):
    """Test the median lies between floor(np) and ceil(np)."""
    check = median_check(n, p)
    assert check.holds
    assert check.below <= 0.5 <= check.above
