"""Main FastAPI application."""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src.api.dependencies import bootstrap_error_handler
from src.api.routers import bounds, estimates, graphs, health, partitions
from src.core.config import get_settings
from src.core.exceptions import BootstrapError


def create_app() -> FastAPI:
    """
    Create and configure FastAPI application.

    Returns:
        Configured FastAPI app
    """
    settings = get_settings()

    app = FastAPI(
        title=settings.app_name,
        description=(
            "Bootstrap percolation on hypercubes, tori and d-regular graphs: "
            "seeded estimates, exact small-graph probabilities, bounds and partitions."
        ),
        version=settings.app_version,
    )

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    app.add_exception_handler(BootstrapError, bootstrap_error_handler)

    app.include_router(health.router)
    app.include_router(graphs.router)
    app.include_router(estimates.router)
    app.include_router(bounds.router)
    app.include_router(partitions.router)

    return app


# Create app instance
app = create_app()


@app.get("/")
async def root():
    """Root endpoint with API information."""
    settings = get_settings()
    return {
        "name": settings.app_name,
        "version": settings.app_version,
        "docs": "/docs",
        "health": "/health",
    }
