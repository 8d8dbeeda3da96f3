"""FastAPI application exposing one POST endpoint per command."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .handlers import (
    run_cumulants,
    run_embed_check,
    run_freeness,
    run_moments,
    run_relations,
    run_rtransform,
    run_verify_catalan,
)
from .models import (
    CumulantsRequest,
    EmbedCheckRequest,
    FreenessRequest,
    MomentsRequest,
    RelationsRequest,
    ReportResponse,
    RTransformRequest,
    VerifyCatalanRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="gwp",
        description=(
            "Symbolic and numeric free probability on directed-graph "
            "operator algebras"
        ),
        version="0.1.0",
    )

    def _run(handler, req) -> dict:
        try:
            return handler(req).to_payload()
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/moments", response_model=ReportResponse)
    def moments(req: MomentsRequest):
        return _run(run_moments, req)

    @app.post("/cumulants", response_model=ReportResponse)
    def cumulants(req: CumulantsRequest):
        return _run(run_cumulants, req)

    @app.post("/rtransform", response_model=ReportResponse)
    def rtransform(req: RTransformRequest):
        return _run(run_rtransform, req)

    @app.post("/verify-catalan", response_model=ReportResponse)
    def verify_catalan(req: VerifyCatalanRequest):
        return _run(run_verify_catalan, req)

    @app.post("/freeness", response_model=ReportResponse)
    def freeness(req: FreenessRequest):
        return _run(run_freeness, req)

    @app.post("/relations", response_model=ReportResponse)
    def relations(req: RelationsRequest):
        return _run(run_relations, req)

    @app.post("/embed-check", response_model=ReportResponse)
    def embed_check(req: EmbedCheckRequest):
        return _run(run_embed_check, req)

    return app


app = create_app()
