"""FastAPI application exposing the toolkit as JSON endpoints.

Every computation is a pure function of its request body, so the endpoints
are stateless POSTs.  Domain input problems map to 400, numerical failures
(non-convergence, overflow, too few roots) to 500; schema violations are
FastAPI's usual 422.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import InputError, NumericsError
from . import handlers
from . import schemas as sm


def _run(handler, cfg):
    try:
        return handler(cfg)
    except InputError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except NumericsError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc


def create_app() -> FastAPI:
    app = FastAPI(
        title="sturmspec",
        version=__version__,
        description=(
            "Spectral computations for -y'' + q(x) y = mu y: eigenvalues under "
            "six boundary conditions, transformation-kernel solving, and "
            "spectral-coincidence verification experiments."
        ),
    )

    @app.get("/health", response_model=sm.HealthResponse)
    def health() -> sm.HealthResponse:
        return sm.HealthResponse(status="ok", version=__version__)

    @app.post("/spectrum", response_model=sm.SpectrumResponse)
    def spectrum(cfg: sm.SpectrumConfig) -> sm.SpectrumResponse:
        return _run(handlers.handle_spectrum, cfg)

    @app.post("/compare", response_model=sm.CompareResponse)
    def compare(cfg: sm.CompareConfig) -> sm.CompareResponse:
        return _run(handlers.handle_compare, cfg)

    @app.post("/verify", response_model=sm.TheoremReportModel)
    def verify(cfg: sm.VerifyConfig) -> sm.TheoremReportModel:
        return _run(handlers.handle_verify, cfg)

    @app.post("/kernel", response_model=sm.KernelResponse)
    def kernel(cfg: sm.KernelConfig) -> sm.KernelResponse:
        return _run(handlers.handle_kernel, cfg)

    @app.post("/oracle", response_model=sm.OracleResponse)
    def oracle(cfg: sm.OracleConfig) -> sm.OracleResponse:
        return _run(handlers.handle_oracle, cfg)

    @app.post("/identities", response_model=sm.IdentitiesResponse)
    def identities(cfg: sm.IdentitiesConfig) -> sm.IdentitiesResponse:
        return _run(handlers.handle_identities, cfg)

    @app.post("/trajectory", response_model=sm.TrajectoryResponse)
    def trajectory(cfg: sm.TrajectoryConfig) -> sm.TrajectoryResponse:
        return _run(handlers.handle_trajectory, cfg)

    return app


app = create_app()
