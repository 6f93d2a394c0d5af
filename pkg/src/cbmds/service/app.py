"""HTTP front end.

The solvers run at a central sink in this architecture, so the service is the
deployable unit: it accepts measured networks for localization, runs demo
trials and sweeps, and exposes the deterministic self-checks. Domain errors
map to 400 responses carrying the error class name.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..errors import CbmdsError
from ..harness import (
    demo_trial,
    raw_csv,
    run_sweep,
    summarize,
    summary_csv,
    validate_fixtures,
)
from ..localization import cb_mds, mds_map_baseline
from .schemas import (
    CheckModel,
    DemoRequest,
    DemoResponse,
    HealthResponse,
    LocalizeRequest,
    LocalizeResponse,
    PositionModel,
    SweepRequest,
    SweepResponse,
    ValidateResponse,
)

SERVICE_VERSION = "0.1.0"


def create_app() -> FastAPI:
    app = FastAPI(title="cbmds", version=SERVICE_VERSION)

    @app.exception_handler(CbmdsError)
    async def handle_domain_error(request, exc: CbmdsError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def handle_value_error(request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": "ValueError", "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=SERVICE_VERSION)

    @app.post("/localize", response_model=LocalizeResponse)
    def localize(req: LocalizeRequest) -> LocalizeResponse:
        net = req.network.to_network()
        anchors = {a.id: np.array([a.x, a.y]) for a in req.anchors}
        if req.algorithm == "mds_map":
            rel = mds_map_baseline(net, anchors)
            k = None
        else:
            rel = cb_mds(net, req.cluster_count, anchors, seed=req.seed)
            k = req.cluster_count
        positions = [
            PositionModel(id=i, x=float(x), y=float(y))
            for i, (x, y) in zip(rel.node_ids, rel.coords)
        ]
        return LocalizeResponse(algorithm=req.algorithm, cluster_count=k, positions=positions)

    @app.post("/demo", response_model=DemoResponse)
    def demo(req: DemoRequest) -> DemoResponse:
        result = demo_trial(
            shape=req.shape,
            placement=req.placement,
            nodes=req.nodes,
            radio_range=req.radio_range,
            cluster_count=req.cluster_count,
            anchor_count=req.anchors,
            seed=req.seed,
            include_svg=req.include_svg,
        )
        return DemoResponse.from_result(result)

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest) -> SweepResponse:
        results = run_sweep(req.to_config())
        failures = sum(1 for r in results if r.mean_error is None)
        return SweepResponse(
            rows=len(results),
            failures=failures,
            raw_csv=raw_csv(results),
            summary_csv=summary_csv(summarize(results)),
        )

    @app.get("/validate", response_model=ValidateResponse)
    def validate() -> ValidateResponse:
        checks = validate_fixtures()
        return ValidateResponse(
            checks=[CheckModel.from_result(c) for c in checks],
            all_passed=all(c.passed for c in checks),
        )

    return app
