"""
Sphere and ball geometry: BFS distances, spheres S(x,k), balls B(x,k),
connected components and the sphere-neighbour profile f_1..f_k.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.core.config import get_settings
from src.core.exceptions import GraphSpecError, ProfileBudgetError
from src.core.models import SphereNeighborProfile
from src.graphs.families import Graph
from src.sampling.rng import vertex_uniforms

logger = logging.getLogger(__name__)

UNREACHABLE = -1

# Bytes of BFS state kept in memory at once when scanning many base vertices.
_BATCH_BYTES = 2**24


def distances_from_many(
    g: Graph, sources: Sequence[int], max_radius: Optional[int] = None
) -> np.ndarray:
    """
    Multi-source BFS: one distance row per source.

    Args:
        g: Graph
        sources: Base vertices
        max_radius: Stop expanding after this many layers

    Returns:
        (len(sources), N) int32 array, -1 for vertices not reached
    """
    xs = [g.check_vertex(x) for x in sources]
    rows = np.arange(len(xs))
    dist = np.full((len(xs), g.num_vertices), UNREACHABLE, dtype=np.int32)
    dist[rows, xs] = 0
    frontier = dist == 0
    visited = frontier.copy()
    level = 0
    while frontier.any() and (max_radius is None or level < max_radius):
        level += 1
        fresh = (g.neighbor_counts(frontier) > 0) & ~visited
        dist[fresh] = level
        visited |= fresh
        frontier = fresh
    return dist


def distances_from(g: Graph, x: int, max_radius: Optional[int] = None) -> np.ndarray:
    """BFS distances from ``x`` to every vertex (-1 if unreachable)."""
    return distances_from_many(g, [x], max_radius)[0]


def distance(g: Graph, x: int, y: int) -> int:
    y = g.check_vertex(y)
    return int(distances_from(g, x)[y])


def sphere(g: Graph, x: int, k: int) -> np.ndarray:
    """S(x,k): sorted vertices at distance exactly k from x."""
    if not 0 <= k <= g.num_vertices:
        raise GraphSpecError(f"radius must lie in [0, {g.num_vertices}], got {k}")
    return np.flatnonzero(distances_from(g, x, max_radius=k) == k)


def ball(g: Graph, x: int, k: int) -> np.ndarray:
    """B(x,k): sorted vertices at distance at most k from x."""
    if not 0 <= k <= g.num_vertices:
        raise GraphSpecError(f"radius must lie in [0, {g.num_vertices}], got {k}")
    dist = distances_from(g, x, max_radius=k)
    return np.flatnonzero(dist >= 0)


def sphere_sizes(g: Graph, x: int) -> List[int]:
    """|S(x,0)|, |S(x,1)|, ... up to the eccentricity of x."""
    dist = distances_from(g, x)
    return np.bincount(dist[dist >= 0]).tolist()


def components(g: Graph) -> np.ndarray:
    """Connected-component label of every vertex."""
    n = g.num_vertices
    if g.degree == 0:
        return np.arange(n)
    table = g.neighbor_table()
    indptr = np.arange(0, table.size + 1, g.degree)
    data = np.ones(table.size, dtype=np.int8)
    adjacency = csr_matrix((data, table.reshape(-1), indptr), shape=(n, n))
    _, labels = connected_components(adjacency, directed=False)
    return labels


# ============= Sphere-neighbour Profile =============


def _profile_rows(g: Graph, sources: Sequence[int], k: int) -> np.ndarray:
    """Per-source maxima max_y |S(x,i) ∩ Γ(y)| over y outside B(x,i-1), shape (len, k)."""
    dist = distances_from_many(g, sources, max_radius=k + 1)
    radii = np.arange(1, k + 1, dtype=np.int32)
    shells = dist[:, None, :] == radii[None, :, None]
    counts = g.neighbor_counts(shells)
    # y outside B(x, i-1): reachable at distance >= i (unreached y have no neighbour in S(x,i))
    eligible = dist[:, None, :] >= radii[None, :, None]
    return np.where(eligible, counts, 0).max(axis=-1)


def sphere_neighbor_profile(
    g: Graph, k: int, samples: Optional[int] = None, seed: int = 0
) -> SphereNeighborProfile:
    """
    Sphere-neighbour profile f_i = max over x and y outside B(x,i-1) of
    |S(x,i) ∩ Γ(y)|, for i = 1..k. Vacuous maxima are reported as 1.

    Vertex-transitive families scan only x = 0, which is exact by symmetry.
    Otherwise every x is scanned unless ``samples`` is given, in which case
    that many base vertices are drawn and the result is a lower bound.

    Raises:
        ProfileBudgetError: If the exhaustive scan exceeds the work budget
    """
    if k < 1:
        raise GraphSpecError(f"profile radius must be >= 1, got {k}")
    n = g.num_vertices

    if g.is_vertex_transitive:
        sources: List[int] = [0]
        exact = True
    elif samples is not None:
        if samples < 1:
            raise GraphSpecError("samples must be >= 1")
        order = np.argsort(vertex_uniforms(seed, [0], n)[0], kind="stable")
        sources = sorted(int(v) for v in order[: min(samples, n)])
        exact = len(sources) == n
    else:
        sources = list(range(n))
        exact = True

    budget = get_settings().profile_budget
    work = len(sources) * n * k * max(g.degree, 1)
    if work > budget:
        raise ProfileBudgetError(
            f"profile scan of {g.spec} to radius {k} needs {work} steps, budget is {budget}; "
            "pass a sample count"
        )

    batch = max(1, _BATCH_BYTES // max(1, (k + 2) * n))
    best = np.zeros(k, dtype=np.int64)
    for start in range(0, len(sources), batch):
        rows = _profile_rows(g, sources[start : start + batch], k)
        best = np.maximum(best, rows.max(axis=0))

    f = [max(1, int(v)) for v in best]
    logger.info(f"Profile of {g.spec} to radius {k}: f={f} (exact={exact})")
    return SphereNeighborProfile(
        graph=g.spec, k=k, f=f, exact=exact, samples=None if exact else len(sources)
    )


def torus_profile(k: int, graph: str = "torus") -> SphereNeighborProfile:
    """Closed-form profile f_i = i + 1 of tori and hypercubes."""
    return SphereNeighborProfile(graph=graph, k=k, f=[i + 1 for i in range(1, k + 1)])

