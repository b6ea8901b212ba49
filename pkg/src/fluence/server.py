"""HTTP document service.

All selection state lives in the client; the server answers read-only
queries over the immutable post-run document, so identical requests get
identical responses.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .document import Document
from .errors import EvalError


class SelectRequest(BaseModel):
    roots: list[int]
    direction: Literal["upstream", "downstream"]
    mode: Literal["persistent", "transient"]


def create_app(document: Document) -> FastAPI:
    app = FastAPI(title="fluence document service")
    # the browser viewer may be served from a different origin
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/document")
    def get_document() -> dict:
        return document.bundle()

    @app.post("/select")
    def select(request: SelectRequest) -> dict:
        size = len(document.graph)
        unknown = [r for r in request.roots if not 0 <= r < size]
        if unknown:
            raise HTTPException(status_code=400,
                                detail=f"unknown vertex {unknown[0]}")
        try:
            return document.select(request.roots, request.direction, request.mode)
        except EvalError as err:
            raise HTTPException(status_code=400, detail=str(err)) from None

    return app


def serve(document: Document, port: int) -> None:
    import uvicorn

    uvicorn.run(create_app(document), host="127.0.0.1", port=port)
