"""Shared test configuration and fixtures."""

import os

import pytest

# Environment defaults before any src module builds its settings
os.environ.setdefault("BOOTPERC_ENVIRONMENT", "test")
os.environ.setdefault("BOOTPERC_LOG_LEVEL", "WARNING")
os.environ.setdefault("BOOTPERC_SEED", "20240601")

from src.core.models import ThresholdSchedule
from src.graphs.builder import build_graph, fixture_spec


@pytest.fixture
def q2():
    """Q_2: vertices 00=0, 01=1, 10=2, 11=3."""
    return build_graph("hypercube:2")


@pytest.fixture
def q3():
    return build_graph("hypercube:3")


@pytest.fixture
def prism():
    """Hexagonal prism, a 12-vertex cubic fixture."""
    return build_graph(fixture_spec("prism"))


@pytest.fixture
def torus53():
    return build_graph("torus:5^3")


@pytest.fixture
def threshold2():
    return ThresholdSchedule.constant(2)


@pytest.fixture
def small_graphs():
    """Small graphs covering every family."""
    return [
        build_graph("hypercube:4"),
        build_graph("torus:4^2"),
        build_graph("torus:2^3"),
        build_graph(fixture_spec("franklin")),
        build_graph("random-regular:20,3,5"),
        build_graph("union:2*hypercube:2+torus:2^2"),
    ]
