import logging
from contextlib import asynccontextmanager
from datetime import datetime

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from src.circuits.routes import circuits_router
from src.exceptions import CapacityError, DomainError, SimulationError
from src.logging_config import setup_logging
from src.qvolume.routes import qvolume_router
from src.sawtooth.routes import sawtooth_router
from src.schemas import APIInfoResponse, HealthCheckResponse

setup_logging(name="server")
logger = logging.getLogger(__name__)

SERVICE_NAME = "Quantum Dynamics Simulator API"
VERSION = "0.1.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"{SERVICE_NAME} started")
    yield
    logger.info(f"{SERVICE_NAME} shutting down")


app = FastAPI(
    title=SERVICE_NAME,
    description="Gate-level quantum sawtooth map, circuit dumps and quantum volume",
    version=VERSION,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)


@app.middleware("http")
async def log_requests(request: Request, call_next):
    """Log all HTTP requests and responses."""
    start_time = datetime.now()

    logger.info(
        f"Request: {request.method} {request.url.path} "
        f"from {request.client.host if request.client else 'unknown'}"
    )

    response = await call_next(request)

    process_time = (datetime.now() - start_time).total_seconds()

    logger.info(
        f"Response: {response.status_code} for {request.method} {request.url.path} "
        f"- {process_time:.3f}s"
    )

    return response


app.include_router(circuits_router)
app.include_router(sawtooth_router)
app.include_router(qvolume_router)


def _error(status_code: int, error: str, exc: Exception) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"error": error, "message": str(exc), "detail": type(exc).__name__},
    )


@app.exception_handler(DomainError)
async def domain_error_handler(request: Request, exc: DomainError) -> JSONResponse:
    """Out-of-range parameters are client errors."""
    logger.warning(f"Rejected {request.url.path}: {exc}")
    return _error(422, "Unprocessable Entity", exc)


@app.exception_handler(CapacityError)
async def capacity_error_handler(request: Request, exc: CapacityError) -> JSONResponse:
    logger.warning(f"Capacity exceeded on {request.url.path}: {exc}")
    return _error(413, "Capacity Exceeded", exc)


@app.exception_handler(SimulationError)
async def simulation_error_handler(request: Request, exc: SimulationError) -> JSONResponse:
    """Fit and numerical failures."""
    logger.error(f"Simulation failed on {request.url.path}: {exc}", exc_info=True)
    return _error(500, "Simulation Error", exc)


@app.exception_handler(500)
async def internal_server_error_handler(
    request: Request, exc: Exception
) -> JSONResponse:
    """Handle internal server errors with custom response."""
    logger.error(f"Internal server error: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={
            "error": "Internal Server Error",
            "message": "An unexpected error occurred.",
            "detail": str(exc) if app.debug else None,
        },
    )


@app.exception_handler(404)
async def not_found_handler(request: Request, exc: HTTPException) -> JSONResponse:
    """Handle 404 errors with custom response."""
    return JSONResponse(
        status_code=404,
        content={
            "error": "Not Found",
            "message": "The requested resource was not found.",
            "path": str(request.url.path),
        },
    )


@app.get("/", response_model=APIInfoResponse)
async def root() -> APIInfoResponse:
    """Root endpoint providing API information."""
    return APIInfoResponse(
        message=f"Welcome to the {SERVICE_NAME}",
        description="Gate-level quantum sawtooth map, circuit dumps and quantum volume",
        version=VERSION,
        endpoints={
            "docs": "/docs",
            "redoc": "/redoc",
            "health": "/health",
            "map_step": "/circuits/map-step",
            "qft": "/circuits/qft",
            "distribution": "/sawtooth/distribution",
            "qvolume": "/qvolume",
        },
    )


@app.get("/health", response_model=HealthCheckResponse)
async def health_check() -> HealthCheckResponse:
    """Health check endpoint for monitoring."""
    return HealthCheckResponse(status="healthy", service=SERVICE_NAME, version=VERSION)
