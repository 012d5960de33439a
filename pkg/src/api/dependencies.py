"""FastAPI dependencies and error mapping."""

import logging
from typing import Optional, Tuple

from fastapi import Request, status
from fastapi.responses import JSONResponse

from src.core.config import get_settings
from src.core.exceptions import (
    BootstrapError,
    ConvergenceError,
    InvariantBreachError,
    ResourceCapError,
)
from src.core.models import ThresholdSchedule
from src.engine.schedules import parse_schedule
from src.graphs.builder import build_graph
from src.graphs.families import Graph

logger = logging.getLogger(__name__)


def status_for(error: BootstrapError) -> int:
    """HTTP status for a toolkit error: 400 usage, 422 budget, 500 breach."""
    if isinstance(error, InvariantBreachError):
        return status.HTTP_500_INTERNAL_SERVER_ERROR
    if isinstance(error, (ResourceCapError, ConvergenceError)):
        return status.HTTP_422_UNPROCESSABLE_ENTITY
    return status.HTTP_400_BAD_REQUEST


async def bootstrap_error_handler(request: Request, exc: BootstrapError) -> JSONResponse:
    code = status_for(exc)
    logger.warning(f"{request.url.path}: {type(exc).__name__}: {exc}")
    return JSONResponse(status_code=code, content={"detail": str(exc), "error": type(exc).__name__})


def load_graph(spec: str) -> Graph:
    """Build a graph for one request."""
    return build_graph(spec)


def load_graph_and_schedule(spec: str, schedule: str) -> Tuple[Graph, ThresholdSchedule]:
    g = load_graph(spec)
    return g, parse_schedule(schedule, g)


def resolve_seed(seed: Optional[int]) -> int:
    return get_settings().seed if seed is None else seed
