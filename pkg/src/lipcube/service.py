"""FastAPI service wrapping the certified-cubature package.

Routes are thin: every request model is handed to the matching handler in
`api`.  Domain errors map to structured JSON errors — 400 for malformed
expressions or unknown builtins, 422 for evaluation-time failures
(singularities, division by zero, unbounded derivatives).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, api
from .expr import EvalError, ParseError, UnknownBuiltin
from .expr import builtin_names, builtin_source
from .interval import SingularityInDomain, UnboundedDerivative

app = FastAPI(
    title="lipcube",
    description="Certified 2-D cubature for Lipschitz functions on rectangles",
    version=__version__,
)


@app.exception_handler(ParseError)
async def _parse_error(_: Request, exc: ParseError) -> JSONResponse:
    return JSONResponse(status_code=400, content={
        "error": "parse", "position": exc.position, "message": exc.message})


@app.exception_handler(UnknownBuiltin)
async def _unknown_builtin(_: Request, exc: UnknownBuiltin) -> JSONResponse:
    return JSONResponse(status_code=400, content={
        "error": "unknown-builtin", "message": str(exc)})


@app.exception_handler(EvalError)
async def _eval_error(_: Request, exc: EvalError) -> JSONResponse:
    return JSONResponse(status_code=422, content={
        "error": "evaluation", "kind": exc.kind, "position": exc.position,
        "message": exc.message})


@app.exception_handler(SingularityInDomain)
async def _singularity(_: Request, exc: SingularityInDomain) -> JSONResponse:
    return JSONResponse(status_code=422, content={
        "error": "singularity", "position": exc.position, "message": str(exc)})


@app.exception_handler(UnboundedDerivative)
async def _unbounded(_: Request, exc: UnboundedDerivative) -> JSONResponse:
    return JSONResponse(status_code=422, content={
        "error": "unbounded-derivative", "message": str(exc)})


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/v1/builtins")
def builtins() -> dict:
    return {name: builtin_source(name) for name in builtin_names()}


@app.post("/v1/integrate", response_model=api.IntegrateResponse)
def integrate(req: api.IntegrateRequest) -> api.IntegrateResponse:
    return api.integrate(req)


@app.post("/v1/bounds", response_model=api.BoundsResponse)
def bounds(req: api.BoundsRequest) -> api.BoundsResponse:
    return api.bounds(req)


@app.post("/v1/lipschitz", response_model=api.LipschitzResponse)
def lipschitz(req: api.LipschitzRequest) -> api.LipschitzResponse:
    return api.lipschitz(req)


@app.post("/v1/verify", response_model=api.VerifyResponse)
def verify(req: api.VerifyRequest) -> api.VerifyResponse:
    return api.verify_response(api.run_verify(req))


@app.post("/v1/hmap", response_model=api.HMapResponse)
def hmap(req: api.HMapRequest) -> api.HMapResponse:
    return api.hmap(req)
