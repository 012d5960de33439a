"""
Naive reference engine: adjacency lists, infected sets kept as sorted lists,
and two buffers per round. Slow on purpose and independent of the vectorised
engine, so the two can be compared exhaustively on small graphs.
"""

from bisect import bisect_left, insort
from dataclasses import dataclass
from typing import Iterable, List, Optional

from src.core.exceptions import RoundCapExceededError
from src.core.models import ThresholdSchedule


@dataclass
class ReferenceTrace:
    counts: List[int]
    rounds_to_fixpoint: int
    percolated: bool
    final: List[int]


def _contains(sorted_list: List[int], v: int) -> bool:
    i = bisect_left(sorted_list, v)
    return i < len(sorted_list) and sorted_list[i] == v


def reference_step(
    adjacency: List[List[int]], infected: List[int], threshold: int
) -> List[int]:
    """Read from ``infected`` only; write into a fresh list."""
    out = list(infected)
    for v in range(len(adjacency)):
        if _contains(infected, v):
            continue
        hits = 0
        for u in adjacency[v]:
            if _contains(infected, u):
                hits += 1
        if hits >= threshold:
            insort(out, v)
    return out


def reference_run(
    adjacency: List[List[int]],
    initial: Iterable[int],
    sched: ThresholdSchedule,
    max_rounds: Optional[int] = None,
) -> ReferenceTrace:
    n = len(adjacency)
    cap = n + sched.relaxed_rounds if max_rounds is None else max_rounds
    current = sorted(set(int(v) for v in initial))
    counts = [len(current)]
    last_added = 0
    m = 0
    while len(current) < n:
        if m >= cap:
            raise RoundCapExceededError(f"reference run exceeded {cap} rounds")
        nxt = reference_step(adjacency, current, sched.threshold_at(m))
        if len(nxt) > len(current):
            last_added = m + 1
            counts.append(len(nxt))
        elif m >= sched.relaxed_rounds:
            break
        current = nxt
        m += 1
    return ReferenceTrace(
        counts=counts,
        rounds_to_fixpoint=last_added,
        percolated=len(current) == n,
        final=current,
    )
