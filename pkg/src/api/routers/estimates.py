"""Percolation probability and critical point router."""

from typing import Any, Dict

from fastapi import APIRouter

from src.api.dependencies import load_graph_and_schedule, resolve_seed
from src.core.models import (
    CriticalEstimate,
    CriticalRequest,
    Estimate,
    ExactRequest,
    ProbabilityRequest,
    TrialPlan,
)
from src.sampling.estimator import estimate_pc, estimate_percolation_prob
from src.sampling.exact import exact_percolation_prob

router = APIRouter(prefix="/estimates", tags=["estimates"])


@router.post("/probability", response_model=Estimate)
def probability(request: ProbabilityRequest) -> Estimate:
    g, sched = load_graph_and_schedule(request.graph, request.schedule)
    plan = TrialPlan(
        p=request.p, trials=request.trials, master_seed=resolve_seed(request.seed), schedule=sched
    )
    return estimate_percolation_prob(g, plan)


@router.post("/exact")
def exact(request: ExactRequest) -> Dict[str, Any]:
    """Exact percolation probability by enumerating every initial set (small graphs only)."""
    g, sched = load_graph_and_schedule(request.graph, request.schedule)
    return {
        "graph": g.spec,
        "schedule": sched.label,
        "p": request.p,
        "probability": exact_percolation_prob(g, sched, request.p),
    }


@router.post("/pc", response_model=CriticalEstimate)
def critical_point(request: CriticalRequest) -> CriticalEstimate:
    g, sched = load_graph_and_schedule(request.graph, request.schedule)
    return estimate_pc(
        g, sched, request.trials, request.tol, resolve_seed(request.seed), method=request.method
    )
