"""
Greedy distance partitions.

Vertices are visited in ascending id order and each one takes the smallest
class label not already used inside its conflict set, so the output is
deterministic and never needs more classes than the largest conflict set
plus one.
"""

import logging
import math
from itertools import combinations
from typing import Dict, Iterable, List

import numpy as np

from src.core.exceptions import BoundDomainError, PartitionHypothesisError, VertexRangeError
from src.core.models import DistancePartition, SphereNeighborProfile
from src.graphs.families import Graph
from src.graphs.geometry import distances_from_many, sphere

logger = logging.getLogger(__name__)

# Base vertices per BFS batch when collecting conflict sets.
_BFS_BATCH = 256


def _greedy_labels(order: List[int], conflicts: Dict[int, List[int]]) -> List[List[int]]:
    labels: Dict[int, int] = {}
    classes: List[List[int]] = []
    for v in order:
        used = {labels[u] for u in conflicts[v] if u in labels}
        label = next(i for i in range(len(classes) + 1) if i not in used)
        if label == len(classes):
            classes.append([])
        classes[label].append(v)
        labels[v] = label
    return classes


def greedy_distance_partition(
    g: Graph, vertices: Iterable[int], k: int, m: int
) -> DistancePartition:
    """
    Split ``vertices`` into at most ``m`` classes with pairwise distance >= k + 1.

    Distances are measured in ``g``. Two vertices of the set conflict when they
    are within distance k.

    Raises:
        PartitionHypothesisError: If some x has more than m set members in B(x, k)
    """
    if k < 0:
        raise BoundDomainError(f"radius must be >= 0, got {k}")
    members = sorted({g.check_vertex(v) for v in vertices})
    if not members:
        return DistancePartition(classes=[], min_distance=k + 1, class_bound=m)

    in_set = np.zeros(g.num_vertices, dtype=bool)
    in_set[members] = True
    conflicts: Dict[int, List[int]] = {}
    for start in range(0, len(members), _BFS_BATCH):
        batch = members[start : start + _BFS_BATCH]
        dist = distances_from_many(g, batch, max_radius=k)
        near = (dist >= 0) & in_set[None, :]
        for v, row in zip(batch, near):
            close = np.flatnonzero(row)
            if close.size > m:
                raise PartitionHypothesisError(
                    f"B({v}, {k}) holds {close.size} members of the set, budget is {m}"
                )
            conflicts[v] = [int(u) for u in close if u != v]

    classes = _greedy_labels(members, conflicts)
    logger.debug(
        f"Greedy partition of {len(members)} vertices at radius {k}: {len(classes)} classes"
    )
    return DistancePartition(classes=classes, min_distance=k + 1, class_bound=m)


def hypercube_sphere_partition(n: int, x: int, k: int) -> DistancePartition:
    """
    Partition S(x, k) in Q_n into classes of pairwise disjoint k-subsets
    (after translating x to the empty set), i.e. Hamming distance 2k.

    Uses at most k·C(n, k-1) classes: a k-subset meets fewer than
    k·C(n-1, k-1) others.
    """
    if not 1 <= k <= n:
        raise BoundDomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not 0 <= x < 2**n:
        raise VertexRangeError(f"vertex {x} outside Q_{n}")

    subsets = sorted(sum(1 << i for i in combo) for combo in combinations(range(n), k))
    ids = sorted(s ^ x for s in subsets)
    unions: List[int] = []
    classes: List[List[int]] = []
    for v in ids:
        s = v ^ x
        for label, union in enumerate(unions):
            if not union & s:
                unions[label] |= s
                classes[label].append(v)
                break
        else:
            unions.append(s)
            classes.append([v])

    bound = k * math.comb(n, k - 1)
    logger.debug(f"Q_{n} sphere partition k={k}: {len(classes)} classes (bound {bound})")
    return DistancePartition(classes=classes, min_distance=2 * k, class_bound=bound)


def general_sphere_partition(
    g: Graph, x: int, k: int, profile: SphereNeighborProfile
) -> DistancePartition:
    """
    Partition S(x, k) into at most d(f_{k-1} + f_k) + 1 classes with pairwise
    distance >= 3.

    Raises:
        PartitionHypothesisError: If g violates the profile bound around x
    """
    if k < 1:
        raise BoundDomainError(f"sphere partition needs k >= 1, got {k}")
    if profile.k < k:
        raise BoundDomainError(f"profile covers radii up to {profile.k}, need {k}")
    budget = g.degree * (profile.f_at(k - 1) + profile.f_at(k)) + 1
    members = sphere(g, x, k)
    try:
        partition = greedy_distance_partition(g, members.tolist(), 2, budget)
    except PartitionHypothesisError as e:
        raise PartitionHypothesisError(
            f"{g.spec} violates the sphere-neighbour profile {profile.f} around {x}: {e}"
        ) from e
    return partition
