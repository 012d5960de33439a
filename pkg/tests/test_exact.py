"""
Unit tests for the exhaustive percolation oracle.
"""

import math

import pytest

from src.core.config import Settings
from src.core.exceptions import ResourceCapError
from src.core.models import ThresholdSchedule
from src.engine.schedules import parse_schedule
from src.graphs.builder import build_graph
from src.sampling.exact import (
    exact_critical_point,
    exact_percolation_prob,
    percolating_subset_counts,
    subset_masks,
)


def test_subset_masks_bits():
    """Test row i marks the vertices of the binary digits of i."""
    masks = subset_masks(3, 4, 7)
    assert masks.tolist() == [
        [False, False, True],
        [True, False, True],
        [False, True, True],
    ]


def test_threshold2_on_q2(q2, threshold2):
    """Test P = 2p^2 - p^4 on Q_2 with r=2."""
    assert percolating_subset_counts(q2, threshold2) == [0, 0, 2, 4, 1]
    assert exact_percolation_prob(q2, threshold2, 0.5) == pytest.approx(0.4375, abs=1e-12)
    for p in (0.1, 0.3, 0.8):
        assert exact_percolation_prob(q2, threshold2, p) == pytest.approx(2 * p**2 - p**4)


def test_threshold_one_on_q2(q2):
    """Test P = 1 - (1-p)^4 on Q_2 with r=1."""
    sched = ThresholdSchedule.constant(1)
    assert exact_percolation_prob(q2, sched, 0.5) == pytest.approx(0.9375, abs=1e-12)
    assert exact_percolation_prob(q2, sched, 0.0) == 0.0
    assert exact_percolation_prob(q2, sched, 1.0) == 1.0


def test_exact_critical_points(q2, threshold2):
    """Test the polynomial roots match their closed forms."""
    assert exact_critical_point(q2, threshold2) == pytest.approx(
        math.sqrt(1 - math.sqrt(0.5)), abs=1e-9
    )
    assert exact_critical_point(q2, threshold2) == pytest.approx(0.54120, abs=1e-5)
    assert exact_critical_point(q2, ThresholdSchedule.constant(1)) == pytest.approx(
        1 - 2**-0.25, abs=1e-9
    )


def test_majority_on_q2_is_threshold_one(q2):
    """Test majority on the 2-regular Q_2 resolves to r=1, so pc = 1 - 2^(-1/4)."""
    sched = parse_schedule("majority", q2)
    assert sched.r == 1
    assert exact_critical_point(q2, sched) == pytest.approx(0.159104, abs=1e-6)


def test_degenerate_rule_has_zero_critical_point(q2):
    """Test r=0 percolates from the empty set."""
    assert exact_critical_point(q2, ThresholdSchedule.constant(0)) == 0.0


def test_probability_is_monotone(prism):
    """Test the exact curve is nondecreasing in p."""
    sched = ThresholdSchedule.constant(2)
    values = [exact_percolation_prob(prism, sched, p / 20) for p in range(21)]
    assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_size_cap(mocker):
    """Test enumeration refuses graphs above the configured cap."""
    mocker.patch("src.sampling.exact.get_settings", return_value=Settings(exact_max_vertices=3))
    with pytest.raises(ResourceCapError):
        exact_percolation_prob(build_graph("hypercube:2"), ThresholdSchedule.constant(1), 0.5)


def test_invalid_p(q2, threshold2):
    """Test p outside [0, 1] is refused."""
    with pytest.raises(ValueError):
        exact_percolation_prob(q2, threshold2, -0.1)
