"""Bounds router: closed-form threshold expressions and tail inequalities."""

from typing import Dict

from fastapi import APIRouter, Query

from src.bounds.inequalities import (
    central_binomial_lower,
    chernoff_upper,
    reverse_chernoff_lower,
    small_p_tail_upper,
    weighted_tail_upper,
)
from src.bounds.theorems import theorem1_bounds
from src.core.models import (
    BoundResult,
    CentralBinomialRequest,
    ChernoffRequest,
    LayerRequest,
    ReverseChernoffRequest,
    SmallPRequest,
    WeightedBinomialSpec,
)

router = APIRouter(prefix="/bounds", tags=["bounds"])


@router.get("/theorem1")
def theorem1(
    n: int = Query(..., ge=16, description="Hypercube dimension"),
    lambda_lo: float = Query(-2.0),
    lambda_hi: float = Query(0.5),
) -> Dict[str, float]:
    bounds = theorem1_bounds(n, lambda_lo, lambda_hi)
    return {
        "n": n,
        "lambda_lo": bounds.lambda_lo,
        "lambda_hi": bounds.lambda_hi,
        "p_lower": bounds.p_lower,
        "p_upper": bounds.p_upper,
    }


@router.post("/chernoff", response_model=BoundResult)
def chernoff(request: ChernoffRequest) -> BoundResult:
    return chernoff_upper(request.n, request.p, request.t, request.side)


@router.post("/reverse-chernoff", response_model=BoundResult)
def reverse_chernoff(request: ReverseChernoffRequest) -> BoundResult:
    return reverse_chernoff_lower(request.n, request.delta, request.c)


@router.post("/layer4", response_model=BoundResult)
def layer4(request: LayerRequest) -> BoundResult:
    spec = WeightedBinomialSpec(layer_sizes=request.layer_sizes, p=request.p)
    return weighted_tail_upper(spec, request.t)


@router.post("/small-p", response_model=BoundResult)
def small_p(request: SmallPRequest) -> BoundResult:
    return small_p_tail_upper(request.n, request.p, request.m)


@router.post("/central-binomial", response_model=BoundResult)
def central_binomial(request: CentralBinomialRequest) -> BoundResult:
    return central_binomial_lower(request.n, request.m)
