"""
Brute-force oracle over all 2^N initial sets of a small graph.
"""

import logging
import math
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from src.core.config import get_settings
from src.core.exceptions import ResourceCapError
from src.core.models import ThresholdSchedule
from src.engine.dynamics import run_batch
from src.graphs.families import Graph

logger = logging.getLogger(__name__)

_SUBSET_BLOCK = 2**14


def subset_masks(num_vertices: int, start: int, stop: int) -> np.ndarray:
    """Rows for subsets start..stop-1; bit v of the subset index marks vertex v."""
    codes = np.arange(start, stop, dtype=np.int64)
    bits = np.arange(num_vertices, dtype=np.int64)
    return ((codes[:, None] >> bits[None, :]) & 1).astype(bool)


def _check_size(g: Graph) -> None:
    cap = get_settings().exact_max_vertices
    if g.num_vertices > cap:
        raise ResourceCapError(
            f"exact enumeration over 2^{g.num_vertices} subsets exceeds the cap of 2^{cap}"
        )


def percolating_subset_counts(g: Graph, sched: ThresholdSchedule) -> List[int]:
    """Number of percolating initial sets of each size 0..N."""
    _check_size(g)
    return list(_percolating_counts(g, sched))


# Graphs are immutable and hashed by identity, schedules are frozen models.
@lru_cache(maxsize=64)
def _percolating_counts(g: Graph, sched: ThresholdSchedule) -> Tuple[int, ...]:
    n = g.num_vertices
    hist = np.zeros(n + 1, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _SUBSET_BLOCK):
        masks = subset_masks(n, start, min(total, start + _SUBSET_BLOCK))
        result = run_batch(g, masks, sched)
        sizes = masks[result.percolated].sum(axis=1)
        hist += np.bincount(sizes, minlength=n + 1)
    logger.debug(f"{g.spec} {sched.label}: {int(hist.sum())} of {total} subsets percolate")
    return tuple(int(c) for c in hist)


def exact_percolation_prob(g: Graph, sched: ThresholdSchedule, p: float) -> float:
    """
    Sum over percolating subsets S of p^|S| (1-p)^(N-|S|), summed with math.fsum.

    Raises:
        ResourceCapError: If N exceeds the exact-enumeration cap
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    counts = percolating_subset_counts(g, sched)
    n = g.num_vertices
    return math.fsum(c * p**s * (1.0 - p) ** (n - s) for s, c in enumerate(counts) if c)


def exact_critical_point(g: Graph, sched: ThresholdSchedule, target: float = 0.5) -> float:
    """Root of P_p(percolation) = target from the exact polynomial."""
    if exact_percolation_prob(g, sched, 0.0) >= target:
        return 0.0
    return float(
        brentq(lambda p: exact_percolation_prob(g, sched, p) - target, 0.0, 1.0, xtol=1e-14)
    )
