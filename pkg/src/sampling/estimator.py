"""
Monte Carlo estimation of percolation probabilities and critical points.

Trials are split into fixed blocks of consecutive trial indices; each block
is simulated as one batch and only success counts are summed, so results do
not depend on how many workers ran the blocks.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from src.core.config import get_settings
from src.core.exceptions import ConvergenceError
from src.core.models import (
    CriticalEstimate,
    Estimate,
    ProbeRecord,
    ThresholdSchedule,
    TrialPlan,
    WindowEstimate,
)
from src.engine.dynamics import run_batch
from src.graphs.families import DisjointUnionGraph, Graph
from src.sampling.rng import sample_initial_batch, stream_seed, vertex_uniforms

logger = logging.getLogger(__name__)

# Cells of (trials x vertices) simulated per batch.
_BATCH_CELLS = 2**20


def wilson_interval(successes: int, trials: int, level: float = 0.95) -> Tuple[float, float]:
    """
    Wilson score interval for a binomial proportion.

    Returns:
        (lo, hi), clamped to [0, 1] and always containing successes / trials
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    z = float(stats.norm.ppf(0.5 + level / 2.0))
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2.0 * trials)) / denom
    half = z / denom * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials))
    lo = min(max(0.0, center - half), p_hat)
    hi = max(min(1.0, center + half), p_hat)
    return lo, hi


def make_estimate(p: float, successes: int, trials: int, level: float = 0.95) -> Estimate:
    lo, hi = wilson_interval(successes, trials, level)
    return Estimate(
        p=p, trials=trials, successes=successes, p_hat=successes / trials, ci_lo=lo, ci_hi=hi
    )


@dataclass
class BlockingReport:
    """
    Disjoint-union blocking counts.

    A trial is blocked when some component, run on its own, does not fill.
    A component with no initial infection is the simplest such block.
    """

    trials: int
    empty: int
    empty_percolated: int
    blocked: int
    mismatched: int
    percolated: int

    @property
    def blocked_fraction(self) -> float:
        return self.blocked / self.trials

    @property
    def empty_fraction(self) -> float:
        return self.empty / self.trials


class PercolationEstimator:
    """Seeded Monte Carlo estimator bound to one graph."""

    def __init__(
        self,
        graph: Graph,
        workers: int = 1,
        batch_size: int = 256,
        ci_level: float = 0.95,
        doubling_cap: int = 64,
    ):
        """
        Initialize estimator.

        Args:
            graph: Graph shared read-only by all workers
            workers: Threads simulating trial blocks
            batch_size: Maximum trials per vectorised block
            ci_level: Confidence level of Wilson intervals
            doubling_cap: Maximum multiple of the base trial count per probe
        """
        self.graph = graph
        self.workers = max(1, workers)
        self.block = max(1, min(batch_size, _BATCH_CELLS // max(1, graph.num_vertices)))
        self.ci_level = ci_level
        self.doubling_cap = doubling_cap
        self._critical_cache: Dict[Tuple[ThresholdSchedule, int], np.ndarray] = {}

    # ----- plumbing -----

    def _blocks(self, start: int, stop: int) -> List[Tuple[int, int]]:
        return [(lo, min(stop, lo + self.block)) for lo in range(start, stop, self.block)]

    def _map_blocks(
        self, fn: Callable[[Tuple[int, int]], np.ndarray], start: int, stop: int
    ) -> List[np.ndarray]:
        blocks = self._blocks(start, stop)
        if self.workers == 1 or len(blocks) == 1:
            return [fn(b) for b in blocks]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, blocks))

    # ----- direct simulation -----

    def count_successes(
        self, p: float, sched: ThresholdSchedule, master_seed: int, start: int, stop: int
    ) -> int:
        """Percolating trials among trial indices start..stop-1."""

        def run(block: Tuple[int, int]) -> np.ndarray:
            masks = sample_initial_batch(self.graph, p, master_seed, np.arange(*block))
            return run_batch(self.graph, masks, sched).percolated

        return int(sum(int(r.sum()) for r in self._map_blocks(run, start, stop)))

    def estimate_percolation_prob(self, plan: TrialPlan) -> Estimate:
        """Run ``plan.trials`` independent trials and report the Wilson interval."""
        successes = self.count_successes(
            plan.p, plan.schedule, plan.master_seed, 0, plan.trials
        )
        estimate = make_estimate(plan.p, successes, plan.trials, self.ci_level)
        logger.debug(
            f"{self.graph.spec} {plan.schedule.label} p={plan.p}: "
            f"{successes}/{plan.trials} percolated"
        )
        return estimate

    # ----- per-trial critical points -----

    def _critical_block(
        self, sched: ThresholdSchedule, master_seed: int, block: Tuple[int, int]
    ) -> np.ndarray:
        n = self.graph.num_vertices
        u = vertex_uniforms(master_seed, np.arange(*block), n)
        order = np.argsort(u, axis=1, kind="stable")
        ranks = np.empty_like(order)
        np.put_along_axis(ranks, order, np.arange(n)[None, :], axis=1)

        # smallest j such that the j vertices with the lowest uniforms percolate
        lo = np.zeros(len(u), dtype=np.int64)
        hi = np.full(len(u), n, dtype=np.int64)
        while True:
            open_rows = np.flatnonzero(lo < hi)
            if not open_rows.size:
                break
            mid = (lo[open_rows] + hi[open_rows]) // 2
            masks = ranks[open_rows] < mid[:, None]
            ok = run_batch(self.graph, masks, sched).percolated
            hi[open_rows[ok]] = mid[ok]
            lo[open_rows[~ok]] = mid[~ok] + 1

        u_sorted = np.take_along_axis(u, order, axis=1)
        points = np.full(len(u), -np.inf)
        positive = lo > 0
        points[positive] = u_sorted[positive, lo[positive] - 1]
        return points

    def trial_critical_points(
        self, sched: ThresholdSchedule, master_seed: int, trials: int
    ) -> np.ndarray:
        """
        Per-trial exact critical levels: trial i percolates at p iff p > points[i].

        Cached per (schedule, seed) and extended on demand, so repeated calls
        with growing ``trials`` only simulate the new trials.
        """
        key = (sched, master_seed)
        have = self._critical_cache.get(key, np.empty(0))
        if len(have) < trials:
            fresh = self._map_blocks(
                lambda b: self._critical_block(sched, master_seed, b), len(have), trials
            )
            have = np.concatenate([have] + fresh)
            self._critical_cache[key] = have
        return have[:trials]

    def scan(
        self,
        sched: ThresholdSchedule,
        p_values: Sequence[float],
        trials: int,
        master_seed: int,
        coupled: bool = True,
    ) -> List[Estimate]:
        """
        Estimates over a grid of p, sorted by p.

        Coupled mode reuses the same trials at every p through their critical
        levels, so success counts are nondecreasing in p. Uncoupled mode draws
        an independent stream per grid point.
        """
        grid = sorted(p_values)
        if coupled:
            points = self.trial_critical_points(sched, master_seed, trials)
            counts = [int((points < p).sum()) for p in grid]
        else:
            counts = [
                self.count_successes(p, sched, stream_seed(master_seed, i), 0, trials)
                for i, p in enumerate(grid)
            ]
        return [make_estimate(p, c, trials, self.ci_level) for p, c in zip(grid, counts)]

    # ----- critical probability -----

    def _degenerate(self, sched: ThresholdSchedule) -> bool:
        empty = np.zeros((1, self.graph.num_vertices), dtype=bool)
        return bool(run_batch(self.graph, empty, sched).percolated[0])

    def estimate_pc(
        self,
        sched: ThresholdSchedule,
        trials_per_probe: int,
        tol: float,
        master_seed: int,
        target: float = 0.5,
        method: str = "bisection",
    ) -> CriticalEstimate:
        """
        Locate the p where the percolation probability crosses ``target``.

        Bisection decides a probe's side only when its Wilson interval excludes
        the target; otherwise it doubles the probe's trials up to the doubling
        cap and, failing that, stops with the current (wider) bracket. The
        quantile method reads the target quantile of the per-trial critical
        levels with an order-statistic bracket.
        """
        if tol <= 0:
            raise ValueError("tol must be positive")
        if not 0.0 < target < 1.0:
            raise ValueError("target must lie in (0, 1)")

        if self._degenerate(sched):
            logger.warning(f"{sched.label} percolates from the empty set on {self.graph.spec}")
            return CriticalEstimate(
                target=target,
                method=method,
                pc_hat=0.0,
                p_lo=0.0,
                p_hi=0.0,
                converged=True,
                reason="empty initial set percolates",
                degenerate=True,
            )
        if method == "quantile":
            return self._quantile_pc(sched, trials_per_probe, tol, master_seed, target)
        if method != "bisection":
            raise ValueError(f"unknown method {method!r}")
        return self._bisect_pc(sched, trials_per_probe, tol, master_seed, target)

    def _bisect_pc(
        self,
        sched: ThresholdSchedule,
        base_trials: int,
        tol: float,
        master_seed: int,
        target: float,
    ) -> CriticalEstimate:
        p_lo, p_hi = 0.0, 1.0
        probes: List[ProbeRecord] = []
        max_trials = base_trials * self.doubling_cap
        reason = ""

        while p_hi - p_lo > tol:
            mid = 0.5 * (p_lo + p_hi)
            trials = base_trials
            while True:
                points = self.trial_critical_points(sched, master_seed, trials)
                successes = int((points < mid).sum())
                ci_lo, ci_hi = wilson_interval(successes, trials, self.ci_level)
                if ci_hi < target:
                    decision = "below"
                elif ci_lo > target:
                    decision = "above"
                else:
                    decision = "undecided"
                if decision != "undecided" or trials * 2 > max_trials:
                    break
                trials *= 2
            probes.append(
                ProbeRecord(
                    p=mid,
                    trials=trials,
                    successes=successes,
                    ci_lo=ci_lo,
                    ci_hi=ci_hi,
                    seed=master_seed,
                    decision=decision,
                )
            )
            logger.debug(f"probe p={mid:.6f}: {successes}/{trials} -> {decision}")
            if decision == "below":
                p_lo = mid
            elif decision == "above":
                p_hi = mid
            else:
                reason = f"probe at p={mid:.6g} undecided after {trials} trials"
                break

        converged = p_hi - p_lo <= tol
        if converged:
            reason = f"bracket width {p_hi - p_lo:.3g} <= tol {tol:g}"
        else:
            logger.warning(f"Bisection on {self.graph.spec} stopped early: {reason}")
        logger.info(f"pc bracket [{p_lo:.6f}, {p_hi:.6f}] on {self.graph.spec}")
        return CriticalEstimate(
            target=target,
            method="bisection",
            pc_hat=0.5 * (p_lo + p_hi),
            p_lo=p_lo,
            p_hi=p_hi,
            converged=converged,
            reason=reason,
            probes=probes,
        )

    def _quantile_pc(
        self,
        sched: ThresholdSchedule,
        base_trials: int,
        tol: float,
        master_seed: int,
        target: float,
    ) -> CriticalEstimate:
        alpha = 1.0 - self.ci_level
        trials = base_trials
        max_trials = base_trials * self.doubling_cap
        while True:
            points = np.sort(self.trial_critical_points(sched, master_seed, trials))
            points = np.clip(points, 0.0, 1.0)
            # order-statistic bracket [X_(l), X_(u)] for the target quantile (1-indexed)
            binom = stats.binom(trials, target)
            l_idx = int(max(1, binom.ppf(alpha / 2.0)))
            u_idx = int(min(trials, binom.ppf(1.0 - alpha / 2.0) + 1))
            p_lo, p_hi = float(points[l_idx - 1]), float(points[u_idx - 1])
            if p_hi - p_lo <= tol or trials * 2 > max_trials:
                break
            trials *= 2

        pc_hat = float(np.quantile(points, target))
        converged = p_hi - p_lo <= tol
        reason = f"order-statistic bracket width {p_hi - p_lo:.3g} with {trials} trials"
        if not converged:
            logger.warning(f"Quantile bracket on {self.graph.spec} wider than tol: {reason}")
        return CriticalEstimate(
            target=target,
            method="quantile",
            pc_hat=pc_hat,
            p_lo=p_lo,
            p_hi=p_hi,
            converged=converged,
            reason=reason,
        )

    def estimate_window(
        self,
        sched: ThresholdSchedule,
        alpha: float,
        trials_per_probe: int,
        tol: float,
        master_seed: int,
        method: str = "bisection",
    ) -> WindowEstimate:
        """Quantiles p_alpha and p_(1-alpha) of the percolation curve."""
        if not 0.0 < alpha <= 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2], got {alpha}")
        lower = self.estimate_pc(sched, trials_per_probe, tol, master_seed, alpha, method)
        upper = self.estimate_pc(sched, trials_per_probe, tol, master_seed, 1.0 - alpha, method)
        return WindowEstimate(alpha=alpha, lower=lower, upper=upper)

    # ----- disjoint unions -----

    def union_blocking(
        self, sched: ThresholdSchedule, p: float, trials: int, master_seed: int
    ) -> BlockingReport:
        """
        Compare the union run against independent runs of each component.

        The union percolates iff every component fills on its own, so a
        blocked trial must never percolate and an empty component must block.
        """
        if not isinstance(self.graph, DisjointUnionGraph):
            raise TypeError("blocking check needs a disjoint union graph")
        parts = list(zip(self.graph.parts, self.graph.part_slices()))

        def run(block: Tuple[int, int]) -> np.ndarray:
            masks = sample_initial_batch(self.graph, p, master_seed, np.arange(*block))
            empty = np.zeros(len(masks), dtype=bool)
            blocked = np.zeros(len(masks), dtype=bool)
            for part, cols in parts:
                local = masks[:, cols]
                empty |= ~local.any(axis=1)
                blocked |= ~run_batch(part, local, sched).percolated
            percolated = run_batch(self.graph, masks, sched).percolated
            return np.stack([empty, blocked, percolated])

        rows = np.concatenate(self._map_blocks(run, 0, trials), axis=1)
        empty, blocked, percolated = rows[0], rows[1], rows[2]
        report = BlockingReport(
            trials=trials,
            empty=int(empty.sum()),
            empty_percolated=int((empty & percolated).sum()),
            blocked=int(blocked.sum()),
            mismatched=int((blocked == percolated).sum()),
            percolated=int(percolated.sum()),
        )
        logger.info(f"Union blocking on {self.graph.spec}: {report}")
        return report


def get_estimator(graph: Graph, workers: Optional[int] = None) -> PercolationEstimator:
    """Build an estimator configured from settings."""
    settings = get_settings()
    return PercolationEstimator(
        graph,
        workers=workers or settings.workers,
        batch_size=settings.batch_size,
        ci_level=settings.ci_level,
        doubling_cap=settings.trial_doubling_cap,
    )


def estimate_percolation_prob(
    g: Graph, plan: TrialPlan, workers: Optional[int] = None
) -> Estimate:
    return get_estimator(g, workers).estimate_percolation_prob(plan)


def estimate_pc(
    g: Graph,
    sched: ThresholdSchedule,
    trials_per_probe: int,
    tol: float,
    master_seed: int,
    method: str = "bisection",
    workers: Optional[int] = None,
) -> CriticalEstimate:
    return get_estimator(g, workers).estimate_pc(
        sched, trials_per_probe, tol, master_seed, method=method
    )


def estimate_window(
    g: Graph,
    sched: ThresholdSchedule,
    alpha: float,
    trials: int,
    seed: int,
    tol: float = 0.01,
    method: str = "bisection",
    workers: Optional[int] = None,
) -> WindowEstimate:
    return get_estimator(g, workers).estimate_window(sched, alpha, trials, tol, seed, method)


def require_converged(estimate: CriticalEstimate) -> CriticalEstimate:
    """
    Raises:
        ConvergenceError: If the bracket is wider than requested
    """
    if not estimate.converged:
        raise ConvergenceError(estimate.reason)
    return estimate
