"""
Unit tests for the bootstrap dynamics engine.
"""

import numpy as np
import pytest

from src.core.exceptions import RoundCapExceededError, ScheduleError, VertexRangeError
from src.core.models import ThresholdSchedule
from src.engine.dynamics import (
    InfectionState,
    as_mask,
    dominance_chain,
    dominance_check,
    dominance_violations,
    run_batch,
    run_to_fixpoint,
    stabilization_report,
    step,
)
from src.engine.reference import reference_run
from src.sampling.exact import subset_masks


# ============= Single Runs =============


def test_threshold_one_spreads_from_a_vertex(q2):
    """Test r=1 from {0} fills Q_2 in two rounds."""
    trace = run_to_fixpoint(q2, [0], ThresholdSchedule.constant(1))
    assert trace.counts == [1, 3, 4]
    assert trace.rounds_to_fixpoint == 2
    assert trace.percolated


def test_adjacent_pair_is_stuck(q2, threshold2):
    """Test r=2 from an edge of Q_2 infects nothing."""
    trace = run_to_fixpoint(q2, [0, 1], threshold2)
    assert trace.counts == [2]
    assert trace.rounds_to_fixpoint == 0
    assert not trace.percolated
    assert trace.final.tolist() == [True, True, False, False]


def test_antipodal_pair_percolates(q2, threshold2):
    """Test r=2 from a diagonal of Q_2 percolates in one round."""
    trace = run_to_fixpoint(q2, [0, 3], threshold2)
    assert trace.counts == [2, 4]
    assert trace.rounds_to_fixpoint == 1
    assert trace.percolated


def test_empty_and_full_initial_sets(q3, threshold2):
    """Test empty sets stay empty and full sets are already percolated."""
    empty = run_to_fixpoint(q3, [], threshold2)
    assert empty.counts == [0]
    assert not empty.percolated
    full = run_to_fixpoint(q3, range(8), threshold2)
    assert full.percolated
    assert full.rounds_to_fixpoint == 0


def test_constant_zero_infects_everything(q3):
    """Test the degenerate r=0 rule fills the graph in one round."""
    trace = run_to_fixpoint(q3, [], ThresholdSchedule.constant(0))
    assert trace.counts == [0, 8]


def test_newly_infected_sets(q2):
    """Test keep_new records each round's new vertices."""
    trace = run_to_fixpoint(q2, [0], ThresholdSchedule.constant(1), keep_new=True)
    assert trace.newly_infected == [[1, 2], [3]]
    frame = trace.to_frame()
    assert list(frame.columns) == ["round", "infected_count", "new_count"]
    assert frame["new_count"].tolist() == [0, 2, 1]


def test_relaxed_rounds_run_past_quiet_rounds(q3):
    """Test a bootk run does not stop before its relaxed rounds are used."""
    sched = ThresholdSchedule.bootk(3, 2, 1)
    trace = run_to_fixpoint(q3, [0], sched)
    # round 0 threshold 1 adds the three neighbours, round 1 threshold 2 fills the rest
    assert trace.counts == [1, 4, 7, 8]
    assert trace.percolated


def test_round_cap(q2):
    """Test exceeding max_rounds raises RoundCapExceededError."""
    with pytest.raises(RoundCapExceededError):
        run_to_fixpoint(q2, [0], ThresholdSchedule.constant(1), max_rounds=1)
    with pytest.raises(RoundCapExceededError):
        run_batch(q2, np.eye(4, dtype=bool)[:1], ThresholdSchedule.constant(1), max_rounds=1)


def test_step_does_not_mutate(q2, threshold2):
    """Test step returns a fresh state with a read-only mask."""
    state = InfectionState.initial(q2, [0, 3])
    nxt = step(q2, state, threshold2)
    assert state.count == 2
    assert nxt.count == 4
    assert nxt.round == 1
    with pytest.raises(ValueError):
        state.infected[1] = True


def test_as_mask_validation(q2):
    """Test vertex ids and masks are range-checked."""
    assert as_mask(q2, [1, 3]).tolist() == [False, True, False, True]
    with pytest.raises(VertexRangeError):
        as_mask(q2, [4])
    with pytest.raises(VertexRangeError):
        as_mask(q2, np.zeros(3, dtype=bool))


def test_as_mask_refuses_integer_indicators(q2):
    """Test a 0/1 integer vector is not silently read as vertex ids."""
    with pytest.raises(VertexRangeError):
        as_mask(q2, np.array([0, 1, 0, 0]))
    with pytest.raises(VertexRangeError):
        as_mask(q2, np.array([0.0, 1.0]))
    assert as_mask(q2, np.array([0, 1, 0, 0], dtype=bool)).tolist() == [False, True, False, False]
    assert as_mask(q2, np.array([3, 0])).tolist() == [True, False, False, True]
    assert not as_mask(q2, np.array([])).any()


# ============= Batched Engine =============


def test_batch_matches_single_runs(small_graphs):
    """Test run_batch agrees row by row with run_to_fixpoint."""
    rng = np.random.default_rng(7)
    for g in small_graphs:
        masks = rng.random((40, g.num_vertices)) < 0.45
        for sched in (ThresholdSchedule.constant(2), ThresholdSchedule.bootk(2, 2, 1)):
            batch = run_batch(g, masks, sched)
            for row, mask in enumerate(masks):
                trace = run_to_fixpoint(g, mask, sched)
                assert np.array_equal(batch.final[row], trace.final), g.spec
                assert batch.rounds[row] == trace.rounds_to_fixpoint
                assert batch.percolated[row] == trace.percolated


def test_batch_shape_check(q2, threshold2):
    """Test masks of the wrong width are refused."""
    with pytest.raises(VertexRangeError):
        run_batch(q2, np.zeros((2, 5), dtype=bool), threshold2)


def test_reference_engine_agrees_on_every_subset(q3):
    """Test the naive engine matches the vectorised one on all subsets of Q_3."""
    adjacency = q3.adjacency_lists()
    masks = subset_masks(q3.num_vertices, 0, 2**q3.num_vertices)
    for sched in (
        ThresholdSchedule.constant(1),
        ThresholdSchedule.constant(2),
        ThresholdSchedule.bootk(2, 2, 1),
    ):
        batch = run_batch(q3, masks, sched)
        for row, mask in enumerate(masks):
            ref = reference_run(adjacency, np.flatnonzero(mask).tolist(), sched)
            trace = run_to_fixpoint(q3, mask, sched)
            assert ref.counts == trace.counts
            assert ref.rounds_to_fixpoint == batch.rounds[row]
            assert ref.percolated == bool(batch.percolated[row])
            assert ref.final == np.flatnonzero(batch.final[row]).tolist()


# ============= Monotonicity =============


def _all_finals(g, sched):
    """Final sets for every initial subset; row i starts from the vertices of i's bits."""
    return run_batch(g, subset_masks(g.num_vertices, 0, 2**g.num_vertices), sched).final


def test_larger_initial_set_never_shrinks_final(q2, q3):
    """Test A subset of A' gives final(A) subset of final(A') on every subset."""
    for g in (q2, q3):
        for sched in (
            ThresholdSchedule.constant(1),
            ThresholdSchedule.constant(2),
            ThresholdSchedule.constant(3),
            ThresholdSchedule.bootk(3, 2, 1),
        ):
            finals = _all_finals(g, sched)
            rows = np.arange(2**g.num_vertices)
            for v in range(g.num_vertices):
                grown = finals[rows | (1 << v)]
                assert not (finals & ~grown).any(), (g.spec, sched.label, v)


def test_lower_threshold_never_shrinks_final(q3):
    """Test r' <= r gives final(r') containing final(r) on every subset of Q_3."""
    finals = {r: _all_finals(q3, ThresholdSchedule.constant(r)) for r in range(4)}
    for r in range(1, 4):
        assert not (finals[r] & ~finals[r - 1]).any(), r
    assert finals[0].all()


def test_fixpoint_is_idempotent(small_graphs):
    """Test rerunning from a final set adds nothing."""
    rng = np.random.default_rng(21)
    for g in small_graphs:
        for r in (1, 2, 3):
            sched = ThresholdSchedule.constant(r)
            for mask in rng.random((10, g.num_vertices)) < 0.3:
                first = run_to_fixpoint(g, mask, sched)
                again = run_to_fixpoint(g, first.final, sched)
                assert np.array_equal(again.final, first.final), g.spec
                assert again.rounds_to_fixpoint == 0
                assert again.new_counts == [0]


# ============= Dominance and Stabilisation =============


def test_generous_schedule_dominates(q3):
    """Test a relaxed schedule infects a superset in every round."""
    assert dominance_check(q3, [0], ThresholdSchedule.constant(2), ThresholdSchedule.bootk(2, 1, 1))
    chain = [
        ThresholdSchedule.constant(3),
        ThresholdSchedule.bootk(3, 1, 1),
        ThresholdSchedule.bootk(3, 3, 1),
    ]
    assert dominance_chain(q3, [0, 7], chain)


def test_dominance_chain_requires_order(q3):
    """Test an out-of-order chain raises ScheduleError."""
    with pytest.raises(ScheduleError):
        dominance_chain(
            q3, [0], [ThresholdSchedule.bootk(2, 1, 1), ThresholdSchedule.constant(2)]
        )


def test_dominance_violations_detects_reversed_pair(q3):
    """Test the lockstep runner flags a stricter schedule placed second."""
    masks = subset_masks(q3.num_vertices, 0, 2**q3.num_vertices)
    ordered = dominance_violations(
        q3, masks, [ThresholdSchedule.constant(2), ThresholdSchedule.constant(1)]
    )
    reversed_ = dominance_violations(
        q3, masks, [ThresholdSchedule.constant(1), ThresholdSchedule.constant(2)]
    )
    assert not ordered.any()
    # {0} grows under r=1 but not under r=2
    assert reversed_[1]


def test_stabilization_report(q2, q3):
    """Test the relaxed phase of bootk either stops or keeps growing."""
    sched = ThresholdSchedule.bootk(2, 1, 1)
    growing = stabilization_report(q3, [0], sched)
    assert (growing.count_at_k, growing.count_after_k) == (4, 7)
    assert not growing.stopped
    assert growing.not_all
    stuck = stabilization_report(q2, [], sched)
    assert stuck.stopped
    assert stuck.count_at_k == 0
