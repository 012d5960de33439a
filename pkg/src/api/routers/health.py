"""Health check router."""

from typing import Any, Dict

from fastapi import APIRouter

from src.core.config import get_settings

router = APIRouter(prefix="/health", tags=["health"])


@router.get("")
async def health_check() -> Dict[str, Any]:
    """
    Report service status and the limits requests are held to.

    Returns:
        Health status dictionary
    """
    settings = get_settings()
    return {
        "status": "healthy",
        "version": settings.app_version,
        "environment": settings.environment,
        "limits": {
            "default_seed": settings.seed,
            "workers": settings.workers,
            "max_vertices": settings.max_vertices,
            "exact_max_vertices": settings.exact_max_vertices,
        },
    }
