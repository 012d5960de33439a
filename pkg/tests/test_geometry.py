"""
Unit tests for spheres, balls, components and sphere-neighbour profiles.
"""

import numpy as np
import pytest

from src.core.config import Settings
from src.core.exceptions import GraphSpecError, ProfileBudgetError
from src.graphs.builder import build_graph
from src.graphs.geometry import (
    ball,
    components,
    distance,
    distances_from,
    distances_from_many,
    sphere,
    sphere_neighbor_profile,
    sphere_sizes,
    torus_profile,
)


def test_hypercube_spheres(q3):
    """Test sphere sizes of Q_n are binomial coefficients."""
    assert sphere_sizes(q3, 0) == [1, 3, 3, 1]
    assert sphere(build_graph("hypercube:4"), 0, 2).size == 6
    assert sphere(q3, 0, 0).tolist() == [0]


def test_torus_sphere(torus53):
    """Test the unit sphere of [5]^3 has 2d members."""
    assert sphere(torus53, 0, 1).size == 6
    assert sphere(torus53, 7, 1).size == 6


def test_ball_is_union_of_spheres(q3):
    """Test B(x,1) is x plus its neighbours."""
    assert ball(q3, 0, 1).tolist() == [0, 1, 2, 4]
    assert ball(q3, 5, 3).size == 8


def test_distance(q3, prism):
    """Test BFS distances."""
    assert distance(q3, 0, 7) == 3
    assert distance(q3, 6, 6) == 0
    # opposite corners of the hexagonal prism
    assert distance(prism, 0, 9) == 4


def test_hypercube_distance_is_hamming():
    """Test BFS distance equals Hamming distance for every pair, n <= 10."""
    for n in range(1, 11):
        g = build_graph(f"hypercube:{n}")
        x = np.arange(g.num_vertices)
        xor = x[:, None] ^ x[None, :]
        hamming = sum((xor >> b) & 1 for b in range(n))
        assert np.array_equal(distances_from_many(g, x.tolist()), hamming), n


def test_torus_distance_is_circular_l1():
    """Test BFS distance on [n]^d is the sum of circular coordinate gaps."""
    for n in range(2, 6):
        for d in range(1, 4):
            g = build_graph(f"torus:{n}^{d}")
            digits = np.array(np.unravel_index(np.arange(g.num_vertices), (n,) * d))
            gap = np.abs(digits[:, :, None] - digits[:, None, :])
            expected = np.minimum(gap, n - gap).sum(axis=0)
            assert np.array_equal(distances_from_many(g, list(range(g.num_vertices))), expected)


def test_radius_out_of_range(q2):
    """Test negative or oversized radii are rejected."""
    with pytest.raises(GraphSpecError):
        sphere(q2, 0, 5)
    with pytest.raises(GraphSpecError):
        ball(q2, 0, -1)


def test_union_components_and_unreachable():
    """Test each union part is its own component and other parts are unreachable."""
    g = build_graph("union:2*hypercube:2")
    labels = components(g)
    assert len(set(labels[:4])) == 1
    assert len(set(labels[4:])) == 1
    assert labels[0] != labels[4]
    assert distances_from(g, 0)[4:].tolist() == [-1, -1, -1, -1]


def test_connected_fixture(prism):
    """Test the prism is connected."""
    assert np.unique(components(prism)).size == 1


def test_hypercube_profile_matches_closed_form():
    """Test Q_n has f_i = i + 1."""
    profile = sphere_neighbor_profile(build_graph("hypercube:6"), 3)
    assert profile.f == [2, 3, 4]
    assert profile.exact
    assert profile.f == torus_profile(3).f


def test_torus_profile(torus53):
    """Test [5]^3 has f_1 = 2 and f_2 = 3."""
    profile = sphere_neighbor_profile(torus53, 2)
    assert profile.f == [2, 3]
    assert profile.f_at(0) == 1


def test_explicit_profile_scans_every_vertex(prism):
    """Test the exhaustive prism profile is exact."""
    profile = sphere_neighbor_profile(prism, 1)
    assert profile.exact
    assert profile.samples is None
    assert profile.f == [2]


def test_sampled_profile_is_lower_bound(prism):
    """Test sampled profiles are flagged inexact and never exceed the full scan."""
    profile = sphere_neighbor_profile(prism, 2, samples=3, seed=1)
    full = sphere_neighbor_profile(prism, 2)
    assert not profile.exact
    assert profile.samples == 3
    assert all(a <= b for a, b in zip(profile.f, full.f))


def test_profile_budget(mocker, prism):
    """Test the exhaustive scan honours the work budget."""
    mocker.patch("src.graphs.geometry.get_settings", return_value=Settings(profile_budget=10))
    with pytest.raises(ProfileBudgetError):
        sphere_neighbor_profile(prism, 1)


def test_profile_rejects_bad_radius(q2):
    """Test k must be positive."""
    with pytest.raises(GraphSpecError):
        sphere_neighbor_profile(q2, 0)
