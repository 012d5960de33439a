"""
Unit tests for graph specs, adjacency files and random regular graphs.
"""

import numpy as np
import pytest

from src.core.config import Settings
from src.core.exceptions import AdjacencyFileError, GraphSpecError, ResourceCapError
from src.graphs.builder import (
    FIXTURE_NAMES,
    build_graph,
    fixture_spec,
    random_regular_table,
    read_adjacency_file,
    write_adjacency_file,
)


@pytest.mark.parametrize(
    "spec,num_vertices,degree",
    [
        ("hypercube:2", 4, 2),
        ("hypercube:10", 1024, 10),
        ("torus:3^2", 9, 4),
        ("torus:5^3", 125, 6),
        ("torus:2^4", 16, 4),
        ("union:2*hypercube:2", 8, 2),
        ("union:hypercube:2+hypercube:2", 8, 2),
        ("random-regular:20,3,5", 20, 3),
    ],
)
def test_build_graph_sizes(spec, num_vertices, degree):
    """Test vertex counts and degrees of every family."""
    g = build_graph(spec)
    assert g.num_vertices == num_vertices
    assert g.degree == degree
    assert g.spec == spec


@pytest.mark.parametrize(
    "spec",
    ["cube:3", "hypercube", "hypercube:x", "hypercube:0", "torus:3", "torus:1^2",
     "union:union:hypercube:2", "random-regular:5,3,1", "random-regular:4,4,1",
     "random-regular:10,3"],
)
def test_build_graph_rejects_bad_specs(spec):
    """Test malformed specs raise GraphSpecError."""
    with pytest.raises(GraphSpecError):
        build_graph(spec)


def test_build_graph_hypercube_cap():
    """Test dimensions above 30 hit the resource cap."""
    with pytest.raises(ResourceCapError):
        build_graph("hypercube:31")


def test_build_graph_vertex_cap(mocker):
    """Test the configured vertex cap is enforced."""
    mocker.patch("src.graphs.builder.get_settings", return_value=Settings(max_vertices=8))
    assert build_graph("hypercube:3").num_vertices == 8
    with pytest.raises(ResourceCapError):
        build_graph("hypercube:4")
    with pytest.raises(ResourceCapError):
        build_graph("union:3*hypercube:2")


def test_fixtures_are_cubic():
    """Test the bundled fixtures are 12-vertex cubic graphs."""
    for name in FIXTURE_NAMES:
        g = build_graph(fixture_spec(name))
        assert (g.num_vertices, g.degree) == (12, 3)


def test_fixture_lookup_by_bare_name():
    """Test file specs fall back to the fixture directory."""
    g = build_graph("file:prism.adj")
    assert g.num_vertices == 12
    with pytest.raises(GraphSpecError):
        fixture_spec("petersen")


def test_random_regular_is_deterministic():
    """Test the same seed gives the same simple regular graph."""
    a = random_regular_table(30, 4, seed=11)
    b = random_regular_table(30, 4, seed=11)
    assert np.array_equal(a, b)
    assert a.shape == (30, 4)
    assert not np.any(a == np.arange(30)[:, None])


def test_random_regular_restart_cap(mocker):
    """Test exhausting restarts raises ResourceCapError."""
    mocker.patch(
        "src.graphs.builder.get_settings", return_value=Settings(max_regular_restarts=0)
    )
    # the only cubic graph on 4 vertices is K_4; one pairing attempt usually misses it
    with pytest.raises(ResourceCapError):
        for seed in range(200):
            random_regular_table(4, 3, seed)


def test_adjacency_file_roundtrip(tmp_path, q3):
    """Test writing then reading an adjacency file preserves the graph."""
    path = write_adjacency_file(q3, tmp_path / "q3.adj")
    assert path.read_bytes().count(b"\r") == 0
    g = read_adjacency_file(path)
    assert np.array_equal(g.neighbor_table(), np.sort(q3.neighbor_table(), axis=1))


@pytest.mark.parametrize(
    "content",
    ["", "3\n1\n0\n", "2 1\n1\n", "2 1\n1\nx\n", "2 1\n1 0\n0\n", "3 2\n1 2\n0 2\n0 0\n"],
)
def test_adjacency_file_errors(tmp_path, content):
    """Test malformed files raise AdjacencyFileError."""
    path = tmp_path / "bad.adj"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(AdjacencyFileError):
        read_adjacency_file(path)


def test_adjacency_file_missing(tmp_path):
    """Test missing files raise AdjacencyFileError."""
    with pytest.raises(AdjacencyFileError):
        read_adjacency_file(tmp_path / "absent.adj")
