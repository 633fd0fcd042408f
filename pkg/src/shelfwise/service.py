"""HTTP API over a log loaded once at startup.

Endpoints mirror the CLI: /health, /products, /analyze, /sweep,
/simulate. Responses depend only on the loaded log and the request body;
repeat requests are served from a memoization cache byte-identically.
Errors use a uniform body {error, code, detail}; validation problems are
400, unknown products 404, unanalyzable configurations 422 (with the
component partition attached for reducible chains).

Endpoint handlers are synchronous, so the server runs them on its
bounded worker thread pool: long simulations occupy one worker and
excess requests queue. The log and derived chains are immutable, making
concurrent reads safe.
"""
from __future__ import annotations

import hashlib
import io
import json
import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .analysis import NotIrreducible, what_if, what_if_sweep
from .ctmc import SupplyStrategy, enhance_with_supply
from .discovery import CapacityTooSmall, NoRates, discover_ctmc
from .eventlog import EventLog, extract_sublog, list_products, write_jsonl
from .simulate import occupancy_of, sample_trajectory
from .units import TimeUnit

MAX_TRAJECTORY_POINTS = 10_000


class AnalyzeRequest(BaseModel):
    product: str
    rate: float
    capacity: int = 100
    initial: int | None = None
    batch: int = 10
    threshold: int = 70
    maxQuantity: int | None = None
    unit: str = "hours"


class SweepRequest(BaseModel):
    product: str
    rates: list[float]
    capacity: int = 100
    batch: int = 10
    threshold: int = 70
    maxQuantity: int | None = None
    unit: str = "hours"


class SimulateRequest(BaseModel):
    product: str
    rate: float
    horizon: float
    seed: int
    capacity: int = 100
    initial: int | None = None
    batch: int = 10
    unit: str = "hours"
    burnIn: float | None = None


@dataclass
class SessionState:
    """Loaded log plus caches; never shared across different inputs."""

    log: EventLog | None
    source_name: str | None = None
    fingerprint: str | None = None
    cache: dict[str, bytes] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _fingerprint(log: EventLog) -> str:
    buffer = io.StringIO()
    write_jsonl(log, buffer)
    return hashlib.sha256(buffer.getvalue().encode("utf-8")).hexdigest()[:16]


def _error(status: int, code: str, message: str, detail=None) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"error": message, "code": code, "detail": detail})


def _json_bytes(payload) -> bytes:
    return json.dumps(payload, separators=(",", ":")).encode("utf-8")


def create_app(log: EventLog | None, *, source_name: str | None = None,
               cors_origin: str | None = None) -> FastAPI:
    """Build the service around one immutable log (None = nothing loaded)."""
    state = SessionState(log=log, source_name=source_name,
                         fingerprint=_fingerprint(log) if log is not None else None)
    app = FastAPI(title="shelfwise", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "validation", "invalid request body", detail=exc.errors())

    @app.exception_handler(ValueError)
    async def on_value_error(request: Request, exc: ValueError):
        return _error(400, "validation", str(exc))

    @app.exception_handler(NotIrreducible)
    async def on_reducible(request: Request, exc: NotIrreducible):
        sizes = sorted((len(c) for c in exc.report.components), reverse=True)
        return _error(422, "not-irreducible", str(exc),
                      detail={"componentSizes": sizes, "witness": list(exc.report.witness)})

    @app.exception_handler(NoRates)
    async def on_no_rates(request: Request, exc: NoRates):
        return _error(422, "no-rates", str(exc))

    @app.exception_handler(CapacityTooSmall)
    async def on_capacity(request: Request, exc: CapacityTooSmall):
        return _error(422, "capacity-too-small", str(exc))

    def require_log() -> EventLog:
        if state.log is None:
            raise LookupError("no log loaded")
        return state.log

    def sublog_for(product: str):
        current = require_log()
        if product not in current.objects:
            raise KeyError(product)
        return extract_sublog(current, product)

    def cached(key_payload, compute) -> Response:
        key = json.dumps(key_payload, sort_keys=True)
        with state.lock:
            hit = state.cache.get(key)
        if hit is None:
            hit = _json_bytes(compute())
            with state.lock:
                state.cache[key] = hit
        return Response(content=hit, media_type="application/json")

    @app.get("/health")
    def health():
        return {"status": "ok", "log": state.fingerprint}

    @app.get("/products")
    def products():
        if state.log is None:
            return _error(409, "no-log", "no log loaded")
        payload = [
            {"id": s.id, "count": s.count,
             "firstTs": s.first.isoformat(), "lastTs": s.last.isoformat()}
            for s in list_products(state.log)
        ]
        return Response(content=_json_bytes(payload), media_type="application/json")

    @app.post("/analyze")
    def analyze(req: AnalyzeRequest):
        if state.log is None:
            return _error(409, "no-log", "no log loaded")
        try:
            sublog = sublog_for(req.product)
        except KeyError:
            return _error(404, "unknown-product", f"product {req.product!r} not in the log")

        def compute():
            result = what_if(sublog, capacity=req.capacity, batch=req.batch,
                             rate=req.rate, threshold=req.threshold,
                             max_quantity=req.maxQuantity,
                             unit=TimeUnit.parse(req.unit), initial=req.initial)
            return result.to_json_dict()

        return cached(["analyze", req.model_dump()], compute)

    @app.post("/sweep")
    def sweep(req: SweepRequest):
        if state.log is None:
            return _error(409, "no-log", "no log loaded")
        try:
            sublog = sublog_for(req.product)
        except KeyError:
            return _error(404, "unknown-product", f"product {req.product!r} not in the log")

        def compute():
            results = what_if_sweep(sublog, capacity=req.capacity, batch=req.batch,
                                    rates=req.rates, threshold=req.threshold,
                                    max_quantity=req.maxQuantity,
                                    unit=TimeUnit.parse(req.unit))
            return [r.to_json_dict() for r in results]

        return cached(["sweep", req.model_dump()], compute)

    @app.post("/simulate")
    def simulate(req: SimulateRequest):
        if state.log is None:
            return _error(409, "no-log", "no log loaded")
        if req.rate <= 0:
            return _error(400, "validation", f"supply rate must be > 0, got {req.rate}")
        if req.horizon <= 0:
            return _error(400, "validation", f"horizon must be > 0, got {req.horizon}")
        try:
            sublog = sublog_for(req.product)
        except KeyError:
            return _error(404, "unknown-product", f"product {req.product!r} not in the log")

        def compute():
            chain, _ = discover_ctmc(sublog, req.capacity, req.initial,
                                     TimeUnit.parse(req.unit))
            enhanced = enhance_with_supply(chain, SupplyStrategy(req.batch, req.rate))
            trajectory = sample_trajectory(enhanced, req.horizon, req.seed)
            burn_in = 0.01 * req.horizon if req.burnIn is None else req.burnIn
            occupancy = occupancy_of(trajectory, enhanced.n_states, burn_in)

            n = len(trajectory)
            if n > MAX_TRAJECTORY_POINTS:
                keep = np.unique(np.linspace(0, n - 1, MAX_TRAJECTORY_POINTS).astype(int))
            else:
                keep = np.arange(n)
            points = [[float(trajectory.times[i]), int(trajectory.states[i])] for i in keep]
            return {
                "trajectoryDownsampled": points,
                "occupancy": [float(p) for p in occupancy.fractions],
                "rng": trajectory.rng,
            }

        return cached(["simulate", req.model_dump()], compute)

    @app.exception_handler(LookupError)
    async def on_no_log(request: Request, exc: LookupError):
        return _error(409, "no-log", "no log loaded")

    return app
