"""Graph geometry router: spheres and sphere-neighbour profiles."""

from typing import Any, Dict

from fastapi import APIRouter, Query

from src.api.dependencies import load_graph
from src.core.models import ProfileRequest, SphereNeighborProfile, SphereRequest
from src.graphs.geometry import sphere, sphere_neighbor_profile

router = APIRouter(prefix="/graphs", tags=["graphs"])


@router.get("/info")
def graph_info(
    spec: str = Query(..., description="Graph spec, e.g. hypercube:10")
) -> Dict[str, Any]:
    g = load_graph(spec)
    return {
        "graph": g.spec,
        "family": g.family,
        "num_vertices": g.num_vertices,
        "degree": g.degree,
        "vertex_transitive": g.is_vertex_transitive,
    }


@router.post("/profile", response_model=SphereNeighborProfile)
def profile(request: ProfileRequest) -> SphereNeighborProfile:
    """Sphere-neighbour profile f_1..f_k; sampled (a lower bound) when ``samples`` is set."""
    g = load_graph(request.graph)
    return sphere_neighbor_profile(g, request.k, request.samples, request.seed)


@router.post("/sphere")
def sphere_members(request: SphereRequest) -> Dict[str, Any]:
    """
    Size and members of S(x, k).

    Members are capped at ``limit``; ``truncated`` says whether the cap applied.
    """
    g = load_graph(request.graph)
    members = sphere(g, request.x, request.k)
    return {
        "graph": g.spec,
        "x": request.x,
        "k": request.k,
        "size": int(members.size),
        "members": members[: request.limit].tolist(),
        "truncated": bool(members.size > request.limit),
    }
