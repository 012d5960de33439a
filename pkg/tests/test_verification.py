"""
Tests for the invariant suites, run with reduced sizes.
"""

import pytest

from src.cli.verification import (
    SLOW_SUITES,
    SUITES,
    closed_form_pc_suite,
    dominance_suite,
    engine_oracle_suite,
    monotone_scan_suite,
    partitions_suite,
    profiles_suite,
    run_suites,
    sandwich_suite,
    select_suites,
    theorem1_trend_suite,
    union_blocking_suite,
)
from src.core.exceptions import BootstrapError
from src.graphs.builder import fixture_spec


def _all_passed(results):
    return all(r.passed for r in results) and all(r.instances > 0 for r in results)


def test_engine_oracle():
    """Test the vectorised and naive engines agree on small graphs."""
    results = engine_oracle_suite(0, specs=["hypercube:2", "hypercube:3", fixture_spec("prism")])
    assert len(results) == 4
    assert _all_passed(results)


def test_dominance():
    """Test the schedule chain stays nested on sampled initial sets."""
    assert _all_passed(dominance_suite(1, spec="hypercube:8", trials=200))


def test_monotone_scan():
    """Test coupled scans on a small hypercube."""
    assert _all_passed(monotone_scan_suite(2, spec="hypercube:6", trials=200))


def test_closed_form_pc():
    """Test Q_2 roots and quantile estimates."""
    assert _all_passed(closed_form_pc_suite(3))


def test_union_blocking():
    """Test blocking on a union of prisms."""
    results = union_blocking_suite(4, trials=200)
    assert all(r.passed for r in results)


def test_union_blocking_needs_union():
    """Test a plain graph spec is refused."""
    with pytest.raises(BootstrapError):
        union_blocking_suite(4, spec="hypercube:3", trials=10)


def test_sandwich_and_geometry_suites():
    """Test the exact sandwich, partitions and profiles suites."""
    assert all(r.passed for r in sandwich_suite(5, mc_samples=0))
    assert _all_passed(partitions_suite(0, max_n=6, max_k=3))
    assert _all_passed(profiles_suite(0, k=2))


def test_suite_selection():
    """Test 'all' skips slow suites and unknown names are refused."""
    assert set(select_suites("all")) == set(SUITES) - SLOW_SUITES
    assert select_suites("dominance") == ["dominance"]
    with pytest.raises(BootstrapError):
        select_suites("everything")


def test_run_suites_frame():
    """Test one row per invariant."""
    frame = run_suites("profiles", 0)
    assert len(frame) == 2
    assert frame["passed"].all()


@pytest.mark.slow
def test_theorem1_trend():
    """Test the majority threshold on Q_n rises with n."""
    assert _all_passed(theorem1_trend_suite(6))
