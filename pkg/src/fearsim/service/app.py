"""HTTP face of the simulator.

The service wraps the core package: clients post config file content and
axis lists, the server runs the scenarios and returns metric rows.  All
file handling stays with the client.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import parse_config, with_overrides
from ..engine import Placement
from ..errors import ConfigError
from ..experiments import run_scenario, summarize, sweep
from ..protocol import RoutingProtocol
from .schemas import (
    MetricsRowModel,
    RunRequest,
    RunResponse,
    SummarizeRequest,
    SummarizeResponse,
    SweepRequest,
    SweepResponse,
    VersionResponse,
)


def _parse_protocol(token: str) -> RoutingProtocol:
    try:
        return RoutingProtocol(token.lower())
    except ValueError:
        raise ConfigError(f"unknown protocol {token!r}; use d-fear, s-fear or seer") from None


def _parse_placement(token: str) -> Placement:
    try:
        return Placement(token.lower())
    except ValueError:
        raise ConfigError(f"unknown placement {token!r}; use random or uniform") from None


def create_app() -> FastAPI:
    app = FastAPI(title="fearsim", version=__version__)

    @app.exception_handler(ConfigError)
    async def config_error_handler(_: Request, exc: ConfigError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/version", response_model=VersionResponse)
    def version() -> VersionResponse:
        return VersionResponse(name="fearsim", version=__version__)

    @app.post("/run", response_model=RunResponse)
    def run(request: RunRequest) -> RunResponse:
        config = parse_config(request.config_text)
        config = with_overrides(
            config,
            protocol=_parse_protocol(request.protocol) if request.protocol else None,
            seed=request.seed,
        )
        row = run_scenario(config)
        return RunResponse(row=MetricsRowModel.from_row(row))

    @app.post("/sweep", response_model=SweepResponse)
    def run_sweep(request: SweepRequest) -> SweepResponse:
        base = parse_config(request.config_text)
        rows = sweep(
            base,
            node_counts=request.node_counts,
            placements=[_parse_placement(p) for p in request.placements],
            protocols=[_parse_protocol(p) for p in request.protocols],
            seeds=request.seeds,
            workers=request.workers,
        )
        return SweepResponse(rows=[MetricsRowModel.from_row(r) for r in rows])

    @app.post("/summarize", response_model=SummarizeResponse)
    def run_summarize(request: SummarizeRequest) -> SummarizeResponse:
        rows = [m.to_row() for m in request.rows]
        return SummarizeResponse(report=summarize(rows))

    return app


app = create_app()
