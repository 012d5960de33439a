"""
Unit tests for threshold schedules and slack helpers.
"""

import pytest

from src.core.exceptions import BoundDomainError, ScheduleError
from src.core.models import ThresholdSchedule
from src.engine.schedules import (
    boot1,
    boot3,
    hypercube_slack,
    majority_threshold,
    parse_schedule,
    regular_slack,
    require_generous,
)
from src.graphs.builder import build_graph


def test_majority_threshold(q2, q3):
    """Test ⌈d/2⌉ on small graphs."""
    assert majority_threshold(q2) == 1
    assert majority_threshold(q3) == 2
    assert majority_threshold(build_graph("torus:3^2")) == 2


def test_bootk_thresholds():
    """Test relaxed rounds step up by t and are clamped at 1."""
    sched = ThresholdSchedule.bootk(5, 3, 1)
    assert [sched.threshold_at(m) for m in range(5)] == [2, 3, 4, 5, 5]
    clamped = ThresholdSchedule.bootk(2, 3, 1)
    assert [clamped.threshold_at(m) for m in range(4)] == [1, 1, 1, 2]


def test_named_processes():
    """Test boot1 and boot3 are bootk with one and three relaxed rounds."""
    assert boot1(6, 2) == ThresholdSchedule.bootk(6, 1, 2)
    assert boot3(6, 1).relaxed_rounds == 3
    assert boot3(6, 1).threshold_at(0) == 3


@pytest.mark.parametrize(
    "text,expected",
    [
        ("majority", ThresholdSchedule.constant(2)),
        ("constant:3", ThresholdSchedule.constant(3)),
        ("bootk:4,2,1", ThresholdSchedule.bootk(4, 2, 1)),
        ("bootk:majority,1,1", ThresholdSchedule.bootk(2, 1, 1)),
        (" constant:0 ", ThresholdSchedule.constant(0)),
    ],
)
def test_parse_schedule(q3, text, expected):
    """Test every schedule form parses against Q_3."""
    assert parse_schedule(text, q3) == expected


@pytest.mark.parametrize(
    "text", ["majority:2", "constant:x", "constant:-1", "bootk:2,1", "bootk:2,a,1", "rule"]
)
def test_parse_schedule_errors(q3, text):
    """Test malformed schedules raise ScheduleError."""
    with pytest.raises(ScheduleError):
        parse_schedule(text, q3)


def test_parse_majority_needs_graph():
    """Test majority cannot be resolved without a graph."""
    with pytest.raises(ScheduleError):
        parse_schedule("majority")


def test_require_generous():
    """Test the generous schedule must never exceed the strict one."""
    strict = ThresholdSchedule.constant(3)
    generous = ThresholdSchedule.bootk(3, 2, 1)
    require_generous(strict, generous)
    with pytest.raises(ScheduleError):
        require_generous(generous, strict)


def test_slack_helpers():
    """Test the per-round slack formulas."""
    assert hypercube_slack(16) == 2
    assert hypercube_slack(100) == 4
    assert regular_slack(30, 2, 0.6) == 3
    with pytest.raises(BoundDomainError):
        hypercube_slack(1)
    with pytest.raises(BoundDomainError):
        regular_slack(10, 0, 0.5)


def test_parse_bootk_slack_from_graph(prism):
    """Test t=auto takes the hypercube slack and t=eps=<x> the d-regular slack."""
    q16 = build_graph("hypercube:16")
    assert parse_schedule("bootk:majority,3,auto", q16) == ThresholdSchedule.bootk(8, 3, 2)
    torus = build_graph("torus:5^3")
    assert parse_schedule("bootk:majority,1,eps=1.0", torus) == ThresholdSchedule.bootk(3, 1, 2)
    assert parse_schedule("bootk:3,2,eps=0.6", build_graph("hypercube:10")).t == 1
    assert parse_schedule("bootk:2,1,eps=1", prism).t == 1


@pytest.mark.parametrize("text", ["bootk:2,1,auto", "bootk:2,0,eps=0.5", "bootk:2,1,eps=x"])
def test_parse_bootk_slack_errors(prism, text):
    """Test auto needs a hypercube and eps needs a positive k and a number."""
    with pytest.raises(ScheduleError):
        parse_schedule(text, prism)


def test_parse_bootk_slack_needs_graph():
    with pytest.raises(ScheduleError):
        parse_schedule("bootk:4,3,auto")
