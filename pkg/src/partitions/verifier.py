"""
Exhaustive partition verifiers.

These deliberately avoid the BFS and greedy code used to build partitions:
general graphs go through scipy's sparse shortest paths, hypercube
partitions through popcounts of XORed vertex ids.
"""

import math
from itertools import combinations
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from src.core.models import DistancePartition, PartitionVerdict
from src.graphs.families import Graph


def _adjacency(g: Graph) -> csr_matrix:
    table = g.neighbor_table()
    rows = np.repeat(np.arange(g.num_vertices), g.degree)
    data = np.ones(rows.size, dtype=np.int8)
    return csr_matrix((data, (rows, table.reshape(-1))), shape=(g.num_vertices,) * 2)


def _structure(partition: DistancePartition, expected: set) -> tuple:
    flat = [v for cls in partition.classes for v in cls]
    disjoint = len(flat) == len(set(flat))
    covers = set(flat) == expected
    count_ok = partition.num_classes <= partition.class_bound
    return disjoint, covers, count_ok


def verify_partition(
    g: Graph, vertices: Iterable[int], partition: DistancePartition
) -> PartitionVerdict:
    """Disjointness, cover, class count and within-class shortest-path distances."""
    disjoint, covers, count_ok = _structure(partition, {int(v) for v in vertices})
    adjacency = _adjacency(g)
    observed: Optional[int] = None
    for cls in partition.classes:
        if len(cls) < 2:
            continue
        dist = shortest_path(adjacency, directed=False, unweighted=True, indices=cls)
        within = dist[:, cls]
        np.fill_diagonal(within, np.inf)
        smallest = within.min()
        if np.isfinite(smallest):
            observed = int(smallest) if observed is None else min(observed, int(smallest))
    distance_ok = observed is None or observed >= partition.min_distance
    return PartitionVerdict(
        disjoint=disjoint,
        covers=covers,
        distance_ok=distance_ok,
        count_ok=count_ok,
        min_observed_distance=observed,
    )


def verify_hypercube_partition(
    n: int, x: int, k: int, partition: DistancePartition
) -> PartitionVerdict:
    """Check a partition of S(x,k) in Q_n with Hamming distances only."""
    expected = {x ^ sum(1 << i for i in combo) for combo in combinations(range(n), k)}
    disjoint, covers, _ = _structure(partition, expected)
    count_ok = partition.num_classes <= k * math.comb(n, k - 1)
    observed: Optional[int] = None
    for cls in partition.classes:
        for a, b in combinations(cls, 2):
            d = (a ^ b).bit_count()
            observed = d if observed is None else min(observed, d)
    distance_ok = observed is None or observed >= 2 * k
    return PartitionVerdict(
        disjoint=disjoint,
        covers=covers,
        distance_ok=distance_ok,
        count_ok=count_ok,
        min_observed_distance=observed,
    )
