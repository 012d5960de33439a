"""
Synchronous bootstrap dynamics.

Round m computes A^(m+1) = A^(m) ∪ {v : |Γ(v) ∩ A^(m)| >= threshold_at(m)}
from the round-m set only. A run stops at the first round m >= k that adds
nothing, where k is the number of relaxed rounds of the schedule, or as soon
as every vertex is infected.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.core.exceptions import RoundCapExceededError, VertexRangeError
from src.core.models import ThresholdSchedule
from src.engine.schedules import require_generous
from src.graphs.families import Graph

logger = logging.getLogger(__name__)

VertexSet = Union[np.ndarray, Iterable[int]]


def as_mask(g: Graph, initial: VertexSet) -> np.ndarray:
    """
    Boolean mask of length N from a bool mask or from vertex ids.

    A non-bool ndarray is read as distinct integer vertex ids; 0/1 indicator
    vectors must be passed with dtype bool.
    """
    if isinstance(initial, np.ndarray) and initial.dtype == np.bool_:
        if initial.shape != (g.num_vertices,):
            raise VertexRangeError(f"mask has shape {initial.shape}, expected ({g.num_vertices},)")
        return initial.copy()
    if isinstance(initial, np.ndarray):
        if initial.ndim != 1 or (initial.size and not np.issubdtype(initial.dtype, np.integer)):
            raise VertexRangeError(
                f"vertex ids must be a 1-D integer array, got {initial.dtype} {initial.shape}"
            )
        if np.unique(initial).size != initial.size:
            raise VertexRangeError("repeated vertex ids; pass 0/1 indicators as a bool mask")
    mask = np.zeros(g.num_vertices, dtype=bool)
    idx = np.asarray(list(initial), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.num_vertices):
        raise VertexRangeError(f"initial set has vertices outside [0, {g.num_vertices})")
    mask[idx] = True
    return mask


def default_round_cap(g: Graph, sched: ThresholdSchedule) -> int:
    """N + k rounds always reach the fixpoint."""
    return g.num_vertices + sched.relaxed_rounds


@dataclass(frozen=True)
class InfectionState:
    """Infected set at a given round; the mask is read-only."""

    infected: np.ndarray
    round: int = 0

    def __post_init__(self) -> None:
        self.infected.flags.writeable = False

    @classmethod
    def initial(cls, g: Graph, vertices: VertexSet) -> "InfectionState":
        return cls(as_mask(g, vertices), 0)

    @property
    def count(self) -> int:
        return int(self.infected.sum())

    def vertices(self) -> List[int]:
        return np.flatnonzero(self.infected).tolist()


def step(g: Graph, state: InfectionState, sched: ThresholdSchedule) -> InfectionState:
    """One synchronous round; returns a fresh state."""
    threshold = sched.threshold_at(state.round)
    joined = g.neighbor_counts(state.infected) >= threshold
    return InfectionState(state.infected | joined, state.round + 1)


@dataclass
class Trace:
    """Outcome of one run.

    ``counts[m]`` is |A^(m)| for m = 0..rounds_to_fixpoint, strictly increasing.
    """

    counts: List[int]
    rounds_to_fixpoint: int
    percolated: bool
    final: np.ndarray
    newly_infected: Optional[List[List[int]]] = None

    @property
    def new_counts(self) -> List[int]:
        return [0] + [b - a for a, b in zip(self.counts, self.counts[1:])]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "round": range(len(self.counts)),
                "infected_count": self.counts,
                "new_count": self.new_counts,
            }
        )


def run_to_fixpoint(
    g: Graph,
    initial: VertexSet,
    sched: ThresholdSchedule,
    max_rounds: Optional[int] = None,
    keep_new: bool = False,
) -> Trace:
    """
    Run the dynamics from ``initial`` until the fixpoint.

    Args:
        g: Graph
        initial: Initial infected set (mask or vertex ids)
        sched: Threshold schedule
        max_rounds: Round cap, default N + k
        keep_new: Retain the newly infected vertices of every round

    Returns:
        Trace with per-round counts and the percolation flag

    Raises:
        RoundCapExceededError: If no fixpoint was reached within max_rounds
    """
    cap = default_round_cap(g, sched) if max_rounds is None else max_rounds
    state = InfectionState.initial(g, initial)
    counts = [state.count]
    new_sets: List[List[int]] = []
    last_added = 0

    while state.count < g.num_vertices:
        if state.round >= cap:
            raise RoundCapExceededError(f"no fixpoint on {g.spec} within {cap} rounds")
        nxt = step(g, state, sched)
        added = nxt.count - state.count
        if added:
            last_added = nxt.round
            counts.append(nxt.count)
            if keep_new:
                new_sets.append(np.flatnonzero(nxt.infected & ~state.infected).tolist())
        elif state.round >= sched.relaxed_rounds:
            break
        state = nxt

    return Trace(
        counts=counts,
        rounds_to_fixpoint=last_added,
        percolated=state.count == g.num_vertices,
        final=state.infected,
        newly_infected=new_sets if keep_new else None,
    )


# ============= Batched Engine =============


@dataclass
class BatchResult:
    """Per-row outcome of ``run_batch``."""

    final: np.ndarray
    rounds: np.ndarray
    percolated: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.percolated = self.final.all(axis=1)


def run_batch(
    g: Graph,
    masks: np.ndarray,
    sched: ThresholdSchedule,
    max_rounds: Optional[int] = None,
) -> BatchResult:
    """
    Evolve every row of a (B, N) boolean array independently.

    Rows leave the working set once they reach their own fixpoint, so a
    batch costs as much as its slowest row only for that row.
    """
    masks = np.asarray(masks, dtype=bool)
    if masks.ndim != 2 or masks.shape[1] != g.num_vertices:
        raise VertexRangeError(f"masks must have shape (B, {g.num_vertices}), got {masks.shape}")
    cap = default_round_cap(g, sched) if max_rounds is None else max_rounds
    state = masks.copy()
    rounds = np.zeros(len(state), dtype=np.int64)
    active = np.flatnonzero(~state.all(axis=1))
    m = 0

    while active.size:
        if m >= cap:
            raise RoundCapExceededError(
                f"{active.size} rows of {g.spec} have no fixpoint within {cap} rounds"
            )
        cur = state[active]
        nxt = cur | (g.neighbor_counts(cur) >= sched.threshold_at(m))
        added = (nxt != cur).any(axis=1)
        state[active] = nxt
        rounds[active[added]] = m + 1
        done = nxt.all(axis=1)
        if m >= sched.relaxed_rounds:
            done |= ~added
        active = active[~done]
        m += 1

    return BatchResult(final=state, rounds=rounds)


# ============= Dominance =============


def dominance_violations(
    g: Graph,
    masks: np.ndarray,
    schedules: Sequence[ThresholdSchedule],
    max_rounds: Optional[int] = None,
) -> np.ndarray:
    """
    Run several schedules in lockstep on the same initial rows and flag every
    row where some round breaks A^(m)_{s_i} ⊆ A^(m)_{s_{i+1}}.

    Returns:
        (B,) boolean array, True where containment failed at some round
    """
    masks = np.asarray(masks, dtype=bool)
    states = [masks.copy() for _ in schedules]
    violated = np.zeros(len(masks), dtype=bool)
    horizon = max(s.relaxed_rounds for s in schedules)
    cap = g.num_vertices + horizon if max_rounds is None else max_rounds
    active = np.arange(len(masks))
    m = 0

    while active.size:
        if m >= cap:
            raise RoundCapExceededError(f"lockstep run on {g.spec} exceeded {cap} rounds")
        changed = np.zeros(active.size, dtype=bool)
        for i, sched in enumerate(schedules):
            cur = states[i][active]
            nxt = cur | (g.neighbor_counts(cur) >= sched.threshold_at(m))
            changed |= (nxt != cur).any(axis=1)
            states[i][active] = nxt
        for lo, hi in zip(states, states[1:]):
            violated[active] |= (lo[active] & ~hi[active]).any(axis=1)
        if m >= horizon:
            active = active[changed]
        m += 1

    return violated


def dominance_chain(
    g: Graph, initial: VertexSet, schedules: Sequence[ThresholdSchedule]
) -> bool:
    """
    True iff every round's infected set grows along the chain of schedules.

    Raises:
        ScheduleError: If some schedule is not pointwise at most its predecessor
    """
    for strict, generous in zip(schedules, schedules[1:]):
        require_generous(strict, generous)
    mask = as_mask(g, initial)[None, :]
    return not bool(dominance_violations(g, mask, schedules)[0])


def dominance_check(
    g: Graph, initial: VertexSet, a: ThresholdSchedule, b: ThresholdSchedule
) -> bool:
    """A^(m) under ``a`` is contained in A^(m) under the more generous ``b`` for every m."""
    return dominance_chain(g, initial, [a, b])


# ============= Stabilisation =============


@dataclass
class StabilizationReport:
    """Whether a k-round relaxed process has stopped by round k without percolating."""

    k: int
    count_at_k: int
    count_after_k: int
    stopped: bool
    not_all: bool


def stabilization_report(
    g: Graph, initial: VertexSet, sched: ThresholdSchedule
) -> StabilizationReport:
    """Compare A^(k) with A^(k+1) for the schedule's k relaxed rounds."""
    state = InfectionState.initial(g, initial)
    for _ in range(sched.relaxed_rounds):
        state = step(g, state, sched)
    after = step(g, state, sched)
    report = StabilizationReport(
        k=sched.relaxed_rounds,
        count_at_k=state.count,
        count_after_k=after.count,
        stopped=after.count == state.count,
        not_all=state.count < g.num_vertices,
    )
    logger.debug(f"Stabilisation of {sched.label} on {g.spec}: {report}")
    return report
