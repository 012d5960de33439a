"""
Invariant suites behind ``bootperc verify``.

Each suite returns one SuiteResult per invariant it checks, with the number
of instances examined and the number that failed. Suites are deterministic
for a given seed.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.bounds.audit import sandwich_audit
from src.core.exceptions import BootstrapError, ScheduleError
from src.core.models import ThresholdSchedule
from src.engine.dynamics import dominance_violations, run_batch, run_to_fixpoint
from src.engine.reference import reference_run
from src.engine.schedules import boot1, boot3, majority_threshold, require_generous
from src.graphs.builder import FIXTURE_NAMES, build_graph, fixture_spec
from src.graphs.families import DisjointUnionGraph
from src.graphs.geometry import components, sphere, sphere_neighbor_profile
from src.partitions.builders import general_sphere_partition, hypercube_sphere_partition
from src.partitions.verifier import verify_hypercube_partition, verify_partition
from src.sampling.estimator import get_estimator
from src.sampling.exact import exact_critical_point, subset_masks
from src.sampling.rng import sample_initial_batch

logger = logging.getLogger(__name__)

SUITE_COLUMNS = ["suite", "invariant", "instances", "failures", "passed"]


@dataclass
class SuiteResult:
    suite: str
    invariant: str
    instances: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_row(self) -> Dict[str, object]:
        return {**asdict(self), "passed": self.passed}


def _results(suite: str, *checks: Tuple[str, int, int]) -> List[SuiteResult]:
    """One SuiteResult per (invariant, instances, failures)."""
    return [SuiteResult(suite, name, int(n), int(f)) for name, n, f in checks]


# ============= Engine =============


def oracle_graph_specs() -> List[str]:
    return ["hypercube:2", "hypercube:3"] + [fixture_spec(name) for name in FIXTURE_NAMES]


def engine_oracle_suite(seed: int, specs: Optional[Sequence[str]] = None) -> List[SuiteResult]:
    """Vectorised engine against the naive engine on every initial subset."""
    outcomes = rounds = finals = traces = instances = 0
    for spec in specs or oracle_graph_specs():
        g = build_graph(spec)
        adjacency = g.adjacency_lists()
        r = majority_threshold(g)
        schedules = [
            ThresholdSchedule.constant(r),
            ThresholdSchedule.constant(1),
            ThresholdSchedule.bootk(r, 2, 1),
        ]
        masks = subset_masks(g.num_vertices, 0, 1 << g.num_vertices)
        for sched in schedules:
            batch = run_batch(g, masks, sched)
            for code, mask in enumerate(masks):
                ref = reference_run(adjacency, np.flatnonzero(mask).tolist(), sched)
                trace = run_to_fixpoint(g, mask, sched)
                instances += 1
                outcomes += bool(batch.percolated[code]) != ref.percolated
                rounds += int(batch.rounds[code]) != ref.rounds_to_fixpoint
                finals += np.flatnonzero(batch.final[code]).tolist() != ref.final
                traces += (
                    trace.counts != ref.counts
                    or trace.rounds_to_fixpoint != ref.rounds_to_fixpoint
                    or trace.percolated != ref.percolated
                )
        logger.info(f"engine-oracle: {spec} checked over {len(masks)} subsets")
    return _results(
        "engine-oracle",
        ("percolation outcome matches naive engine", instances, outcomes),
        ("rounds to fixpoint match naive engine", instances, rounds),
        ("final infected set matches naive engine", instances, finals),
        ("single-run trace matches naive engine", instances, traces),
    )


def dominance_suite(
    seed: int, spec: str = "hypercube:14", p: float = 0.35, trials: int = 1000
) -> List[SuiteResult]:
    """Boot ⊆ Boot1(1) ⊆ Boot3(1) ⊆ Bootk(r,5,1), round by round on shared initial sets."""
    g = build_graph(spec)
    r = majority_threshold(g)
    chain = [
        ThresholdSchedule.constant(r),
        boot1(r, 1),
        boot3(r, 1),
        ThresholdSchedule.bootk(r, 5, 1),
    ]
    ordered = 0
    for strict, generous in zip(chain, chain[1:]):
        try:
            require_generous(strict, generous)
        except ScheduleError:
            ordered += 1

    block = max(1, 2**20 // g.num_vertices)
    violations = 0
    for start in range(0, trials, block):
        masks = sample_initial_batch(g, p, seed, np.arange(start, min(trials, start + block)))
        violations += int(dominance_violations(g, masks, chain).sum())
    return _results(
        "dominance",
        ("schedules pointwise ordered", len(chain) - 1, ordered),
        ("infected sets nested every round", trials, violations),
    )


# ============= Sampling =============


def monotone_scan_suite(
    seed: int,
    spec: str = "hypercube:10",
    p_values: Optional[Sequence[float]] = None,
    trials: int = 500,
) -> List[SuiteResult]:
    """Coupled scan counts are nondecreasing in p and equal direct simulation."""
    g = build_graph(spec)
    sched = ThresholdSchedule.constant(majority_threshold(g))
    if p_values is None:
        p_values = [round(0.1 + 0.02 * i, 12) for i in range(21)]
    grid = list(p_values)
    estimator = get_estimator(g)
    estimates = estimator.scan(sched, grid, trials, seed, coupled=True)
    counts = [e.successes for e in estimates]
    drops = sum(1 for a, b in zip(counts, counts[1:]) if b < a)
    mismatches = sum(
        estimator.count_successes(e.p, sched, seed, 0, trials) != e.successes for e in estimates
    )
    return _results(
        "monotone-scan",
        ("coupled successes nondecreasing in p", len(counts) - 1, drops),
        ("coupled counts equal direct simulation", len(counts), mismatches),
    )


def closed_form_cases() -> List[tuple]:
    return [
        ("hypercube:2", ThresholdSchedule.constant(2), math.sqrt(1.0 - math.sqrt(2.0) / 2.0)),
        ("hypercube:2", ThresholdSchedule.constant(1), 1.0 - 2.0**-0.25),
    ]


def closed_form_pc_suite(
    seed: int, trials: int = 25000, tol: float = 0.004, accuracy: float = 0.005
) -> List[SuiteResult]:
    """Exact roots on Q_2 against closed forms, then the quantile estimate against the root."""
    roots = estimates = 0
    cases = closed_form_cases()
    for spec, sched, expected in cases:
        g = build_graph(spec)
        root = exact_critical_point(g, sched)
        roots += abs(root - expected) > 1e-9
        estimate = get_estimator(g).estimate_pc(sched, trials, tol, seed, method="quantile")
        estimates += abs(estimate.pc_hat - root) > accuracy
        logger.info(f"closed-form-pc: {sched.label} root={root:.6f} pc={estimate.pc_hat:.6f}")
    return _results(
        "closed-form-pc",
        ("exact root equals closed form", len(cases), roots),
        (f"estimate within {accuracy:g} of root", len(cases), estimates),
    )


def union_blocking_suite(
    seed: int,
    spec: Optional[str] = None,
    p: float = 0.5,
    trials: int = 500,
    min_blocked_fraction: float = 0.9,
) -> List[SuiteResult]:
    """A blocked component forbids percolation of the whole union."""
    g = build_graph(spec or f"union:64*{fixture_spec('prism')}")
    if not isinstance(g, DisjointUnionGraph):
        raise BootstrapError(f"union-blocking needs a union spec, got {g.spec}")
    labels = components(g)
    split = sum(np.unique(labels[cols]).size != 1 for cols in g.part_slices())
    merged = int(np.unique(labels).size != len(g.parts))

    sched = ThresholdSchedule.constant(majority_threshold(g))
    report = get_estimator(g).union_blocking(sched, p, trials, seed)
    logger.info(
        f"union-blocking: blocked in {report.blocked}/{trials} trials, "
        f"empty component in {report.empty}"
    )
    return _results(
        "union-blocking",
        ("components coincide with union parts", len(g.parts), split + merged),
        ("blocked iff union fails to percolate", trials, report.mismatched),
        ("empty component never percolates", report.empty, report.empty_percolated),
        (
            f"blocked fraction >= {min_blocked_fraction:g}",
            1,
            report.blocked_fraction < min_blocked_fraction,
        ),
    )


def theorem1_trend_suite(
    seed: int, dims: Sequence[int] = (8, 12, 16), trials: int = 2000, tol: float = 0.01
) -> List[SuiteResult]:
    """p̂_c(Q_n) inside (0.05, 0.5) and increasing from the smallest to the largest n."""
    results = []
    for n in dims:
        g = build_graph(f"hypercube:{n}")
        sched = ThresholdSchedule.constant(majority_threshold(g))
        estimate = get_estimator(g).estimate_pc(sched, trials, tol, seed)
        results.append(estimate)
        logger.info(f"theorem1-trend: Q_{n} pc in [{estimate.p_lo:.4f}, {estimate.p_hi:.4f}]")
    outside = sum(not 0.05 < e.pc_hat < 0.5 for e in results)
    first, last = results[0], results[-1]
    rising = last.pc_hat - first.pc_hat > first.width + last.width
    return _results(
        "theorem1-trend",
        ("pc_hat inside (0.05, 0.5)", len(results), outside),
        ("pc_hat rises beyond bracket widths", 1, not rising),
    )


# ============= Bounds and geometry =============


def sandwich_suite(seed: int, mc_samples: int = 10**6) -> List[SuiteResult]:
    frame = sandwich_audit(n_values=range(10, 31), mc_samples=mc_samples, seed=seed)
    results = []
    for name, rows in frame.groupby("bound_name", sort=True):
        checked = rows[rows["preconds_ok"]]
        failures = int(checked["violated"].sum())
        results.append(SuiteResult("sandwich", f"{name} never violated", len(checked), failures))
    return results


def partitions_suite(
    seed: int, max_n: int = 10, max_k: int = 4, torus_spec: str = "torus:5^3", torus_k: int = 2
) -> List[SuiteResult]:
    cube_instances = cube_failures = 0
    for n in range(1, max_n + 1):
        for k in range(1, min(n, max_k) + 1):
            x = (2**n - 1) // 3
            partition = hypercube_sphere_partition(n, x, k)
            cube_instances += 1
            cube_failures += not verify_hypercube_partition(n, x, k, partition).ok

    g = build_graph(torus_spec)
    profile = sphere_neighbor_profile(g, torus_k)
    torus_instances = torus_failures = 0
    for k in range(1, torus_k + 1):
        partition = general_sphere_partition(g, 0, k, profile)
        verdict = verify_partition(g, sphere(g, 0, k).tolist(), partition)
        torus_instances += 1
        torus_failures += not verdict.ok
    return _results(
        "partitions",
        ("hypercube sphere partitions verified", cube_instances, cube_failures),
        (f"{torus_spec} sphere partitions verified", torus_instances, torus_failures),
    )


def profiles_suite(seed: int, k: int = 3) -> List[SuiteResult]:
    torus = sphere_neighbor_profile(build_graph("torus:5^3"), k).f
    cube = sphere_neighbor_profile(build_graph("hypercube:8"), k).f
    return _results(
        "profiles",
        ("torus:5^3 f_m <= m + 1", k, sum(f > m + 1 for m, f in enumerate(torus, 1))),
        ("hypercube:8 f_m == m + 1", k, sum(f != m + 1 for m, f in enumerate(cube, 1))),
    )


# ============= Registry =============

SuiteFn = Callable[[int], List[SuiteResult]]

SUITES: Dict[str, SuiteFn] = {
    "engine-oracle": engine_oracle_suite,
    "dominance": dominance_suite,
    "monotone-scan": monotone_scan_suite,
    "closed-form-pc": closed_form_pc_suite,
    "sandwich": sandwich_suite,
    "partitions": partitions_suite,
    "profiles": profiles_suite,
    "union-blocking": union_blocking_suite,
    "theorem1-trend": theorem1_trend_suite,
}

SLOW_SUITES = frozenset({"theorem1-trend"})


def select_suites(selector: str) -> List[str]:
    if selector == "all":
        return [name for name in SUITES if name not in SLOW_SUITES]
    if selector not in SUITES:
        raise BootstrapError(f"unknown suite {selector!r}; choose all or {', '.join(SUITES)}")
    return [selector]


def run_suites(selector: str, seed: int) -> pd.DataFrame:
    """Run the selected suites and collect one row per invariant."""
    rows = []
    for name in select_suites(selector):
        logger.info(f"Running suite {name}")
        rows += [result.as_row() for result in SUITES[name](seed)]
    frame = pd.DataFrame(rows, columns=SUITE_COLUMNS)
    failed = frame.loc[~frame["passed"], "invariant"].tolist()
    if failed:
        logger.error(f"{len(failed)} invariants failed: {failed}")
    return frame
