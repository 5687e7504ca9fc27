"""HTTP endpoint: POST /align turns two token lists into a row-stochastic
token-association matrix; GET /health reports readiness and the model id."""

from __future__ import annotations

import os
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .encoders import association_matrix, encoder_from_env


class AlignRequest(BaseModel):
    src_tokens: list[str]
    tgt_tokens: list[str]


class AlignResponse(BaseModel):
    probs: list[list[float]]
    model_id: str


def create_app(encoder_factory=encoder_from_env, load: bool = True) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if load and app.state.encoder is None:
            app.state.encoder = app.state.encoder_factory()
        yield

    app = FastAPI(title="embed-align-service", lifespan=lifespan)
    app.state.encoder = None
    app.state.encoder_factory = encoder_factory
    app.state.bidirectional = os.environ.get("EMBED_ALIGN_BIDIRECTIONAL", "") == "1"

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        # Schema violations are the caller's malformed payload, not a
        # semantic rejection: report 400, keep 422 for empty token lists.
        return JSONResponse(status_code=400, content={"detail": "malformed request body"})

    @app.get("/health")
    def health():
        if app.state.encoder is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {"status": "ok", "model_id": app.state.encoder.model_id}

    @app.post("/align", response_model=AlignResponse)
    def align(request: AlignRequest):
        encoder = app.state.encoder
        if encoder is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        if not request.src_tokens or not request.tgt_tokens:
            raise HTTPException(status_code=422, detail="token lists must be non-empty")
        src_vectors = encoder.encode(request.src_tokens)
        tgt_vectors = encoder.encode(request.tgt_tokens)
        probs = association_matrix(
            src_vectors, tgt_vectors, bidirectional=app.state.bidirectional
        )
        return AlignResponse(probs=probs.tolist(), model_id=encoder.model_id)

    return app


def run() -> None:
    import uvicorn

    port = int(os.environ.get("EMBED_ALIGN_PORT", "8400"))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)


app = create_app()
