"""Partition router."""

from typing import Any, Dict

from fastapi import APIRouter

from src.core.models import HypercubePartitionRequest
from src.partitions.builders import hypercube_sphere_partition
from src.partitions.verifier import verify_hypercube_partition

router = APIRouter(prefix="/partitions", tags=["partitions"])


@router.post("/hypercube")
def hypercube_partition(request: HypercubePartitionRequest) -> Dict[str, Any]:
    """Partition S(x, k) in Q_n and verify it exhaustively."""
    partition = hypercube_sphere_partition(request.n, request.x, request.k)
    verdict = verify_hypercube_partition(request.n, request.x, request.k, partition)
    return {
        "n": request.n,
        "x": request.x,
        "k": request.k,
        "num_classes": partition.num_classes,
        "class_bound": partition.class_bound,
        "min_distance": partition.min_distance,
        "sizes": partition.sizes,
        "verdict": verdict.model_dump(),
        "ok": verdict.ok,
    }
