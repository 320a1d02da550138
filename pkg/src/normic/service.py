"""HTTP service exposing the handler layer.

Domain errors map onto statuses: schema violations 400, search
exhaustion 422, internal check failures 500.  Request bodies are the
same pydantic models the CLI uses, so /schemas documents both.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .api import (
    handle_brauer,
    handle_construct,
    handle_group,
    handle_obstruct,
    handle_selftest,
    handle_symbol,
)
from .errors import InternalCheckError, SchemaError, SearchExhausted
from .schemas import (
    BrauerRequest,
    BrauerResponse,
    ConstructRequest,
    ConstructResponse,
    GroupRequest,
    GroupResponse,
    ObstructRequest,
    ObstructResponse,
    SCHEMA_VERSION,
    SelftestRequest,
    SelftestResponse,
    SymbolRequest,
    SymbolResponse,
    schema_catalog,
)

app = FastAPI(title="normic", version=SCHEMA_VERSION)


def _error_response(status: int, kind: str, exc: Exception) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"kind": kind, "detail": str(exc)}},
    )


@app.exception_handler(SchemaError)
async def _schema_error(request: Request, exc: SchemaError):
    return _error_response(400, "schema-violation", exc)


@app.exception_handler(SearchExhausted)
async def _search_exhausted(request: Request, exc: SearchExhausted):
    return _error_response(422, "search-exhausted", exc)


@app.exception_handler(InternalCheckError)
async def _internal_check(request: Request, exc: InternalCheckError):
    return _error_response(500, "internal-check", exc)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": SCHEMA_VERSION}


@app.get("/schemas")
def schemas() -> dict:
    return schema_catalog()


@app.post("/group", response_model=GroupResponse)
def group(req: GroupRequest) -> GroupResponse:
    return handle_group(req)


@app.post("/brauer", response_model=BrauerResponse)
def brauer(req: BrauerRequest) -> BrauerResponse:
    return handle_brauer(req)


@app.post("/construct", response_model=ConstructResponse)
def construct(req: ConstructRequest) -> ConstructResponse:
    return handle_construct(req)


@app.post("/symbol", response_model=SymbolResponse)
def symbol(req: SymbolRequest) -> SymbolResponse:
    return handle_symbol(req)


@app.post("/obstruct", response_model=ObstructResponse)
def obstruct(req: ObstructRequest) -> ObstructResponse:
    return handle_obstruct(req)


@app.post("/selftest", response_model=SelftestResponse)
def selftest(req: SelftestRequest) -> SelftestResponse:
    return handle_selftest(req)
