"""FastAPI service exposing the laboratory operations.

Run with ``uvicorn divlab.service:app``.  The CLI uses the same app in
process, so responses are identical either way.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import __version__
from ..counterexamples import counterexample_psi, counterexample_upsilon
from ..jacobi import ConvergenceError
from ..linalg import DomainError
from ..params import ParamPoint
from ..probes import hiai_probe_functional, probe_dpi, probe_joint, psi_probe_functional
from ..rand import derive_rng, ginibre, random_haar_unitary
from ..regions import RegionKind, classify, classify_upsilon, normalize_psi_point
from ..stein import error_exponent_curve
from ..sweep import (
    SweepContradiction,
    grid_points_alpha_z,
    grid_points_psi,
    run_sweep,
)
from ..verifiers import SUITE_NAMES, run_suites
from .models import (
    ClassifyResponse,
    ClassifyUpsilonRequest,
    ClassifyUpsilonResponse,
    CounterexampleRequest,
    CounterexampleResponse,
    DpiRequest,
    PointRequest,
    ProbeRequest,
    ProbeResponse,
    SteinRequest,
    SteinResponse,
    SuiteOutcome,
    SweepConfig,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
)

STEIN_CSV_HEADER = "N,epsilon,log_beta,rate,bound_low,bound_high"


def _point_from_request(req: PointRequest) -> ParamPoint:
    if req.alpha is not None:
        return ParamPoint.from_alpha_z(req.alpha, req.z)
    return ParamPoint.from_pqs(req.p, req.q, req.s)


def create_app() -> FastAPI:
    app = FastAPI(title="divlab", version=__version__)

    # parameter problems surface as 422 (client error); numerical breakdowns
    # as 500, so the CLI can map them to distinct exit codes
    @app.exception_handler(ValueError)
    async def _handle_value_error(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(DomainError)
    @app.exception_handler(ConvergenceError)
    @app.exception_handler(RuntimeError)
    async def _handle_numerical_error(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/classify", response_model=ClassifyResponse)
    def classify_endpoint(req: PointRequest) -> ClassifyResponse:
        pt = _point_from_request(req)
        try:
            label = classify(pt.p, pt.q, pt.s)
            np_, nq, ns = normalize_psi_point(pt.p, pt.q, pt.s)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return ClassifyResponse(
            kind=label.kind.value,
            citation=label.citation,
            p=pt.p,
            q=pt.q,
            s=pt.s,
            normalized_p=np_,
            normalized_q=nq,
            normalized_s=ns,
        )

    @app.post("/classify-upsilon", response_model=ClassifyUpsilonResponse)
    def classify_upsilon_endpoint(req: ClassifyUpsilonRequest) -> ClassifyUpsilonResponse:
        try:
            label = classify_upsilon(req.p, req.s)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return ClassifyUpsilonResponse(
            kind=label.kind.value, citation=label.citation, p=req.p, s=req.s
        )

    @app.post("/probe", response_model=ProbeResponse)
    def probe_endpoint(req: ProbeRequest) -> ProbeResponse:
        pt = _point_from_request(req)
        label = classify(pt.p, pt.q, pt.s)
        direction = req.direction
        if direction == "auto":
            direction = (
                "concave" if label.kind is RegionKind.CONCAVE_KNOWN else "convex"
            )
        k_index = req.path[0] if req.path else 0
        if req.k_mode == "identity":
            k = np.eye(req.dim, dtype=np.complex128)
        elif req.k_mode == "haar":
            k = random_haar_unitary(req.dim, derive_rng(req.seed, 3000, k_index))
        else:
            k = ginibre(req.dim, req.dim, derive_rng(req.seed, 3000, k_index))
        if req.functional == "psi":
            functional = psi_probe_functional(k, pt)
        else:
            t = 1.0 if req.t is None else req.t
            functional = hiai_probe_functional(k, pt.p, pt.q, t)
        try:
            report = probe_joint(
                functional,
                direction,
                req.dim,
                req.samples,
                req.seed,
                theta=req.theta,
                spectrum_range=tuple(req.spectrum),
                path=tuple(req.path),
            )
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return ProbeResponse(
            **report.to_json(), label=label.kind.value, citation=label.citation
        )

    @app.post("/dpi", response_model=ProbeResponse)
    def dpi_endpoint(req: DpiRequest) -> ProbeResponse:
        try:
            report = probe_dpi(
                req.alpha, req.z, req.dim, req.n_channels, req.n_state_pairs, req.seed
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        pt = ParamPoint.from_alpha_z(req.alpha, req.z)
        label = classify(pt.p, pt.q, pt.s)
        return ProbeResponse(
            **report.to_json(), label=label.kind.value, citation=label.citation
        )

    @app.post("/sweep", response_model=SweepResponse)
    def sweep_endpoint(config: SweepConfig) -> SweepResponse:
        def axis(a):
            return a.model_dump() if hasattr(a, "model_dump") else a

        if config.kind == "psi":
            points = grid_points_psi(axis(config.p), axis(config.q), axis(config.s))
        else:
            points = grid_points_alpha_z(axis(config.alpha), axis(config.z))
        try:
            result = run_sweep(
                points,
                config.dims,
                config.samples,
                config.seed,
                k_mode=config.k_mode,
                spectrum_range=tuple(config.spectrum),
                theta=config.theta,
            )
        except SweepContradiction as exc:
            return SweepResponse(
                csv="",
                rows=0,
                witnesses=[],
                contradiction={"message": str(exc), "witness": exc.witness},
                metadata={},
            )
        return SweepResponse(
            csv=result.to_csv(),
            rows=len(result.rows),
            witnesses=result.witnesses,
            metadata=result.metadata,
        )

    @app.post("/stein", response_model=SteinResponse)
    def stein_endpoint(req: SteinRequest) -> SteinResponse:
        try:
            rows = error_exponent_curve(req.r, req.s, req.epsilon, req.n_values)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        lines = [STEIN_CSV_HEADER]
        for row in rows:
            lines.append(
                ",".join(
                    [
                        str(row["N"]),
                        repr(row["epsilon"]),
                        repr(row["log_beta"]),
                        repr(row["rate"]),
                        repr(row["bound_low"]),
                        repr(row["bound_high"]),
                    ]
                )
            )
        return SteinResponse(csv="\n".join(lines) + "\n", rows=rows)

    @app.post("/counterexample", response_model=CounterexampleResponse)
    def counterexample_endpoint(req: CounterexampleRequest) -> CounterexampleResponse:
        if req.family == "upsilon":
            report = counterexample_upsilon(req.p, req.s, req.direction)
        else:
            report = counterexample_psi(req.p, req.q, req.s, req.direction)
        return CounterexampleResponse(**report.to_json())

    @app.post("/verify", response_model=VerifyResponse)
    def verify_endpoint(req: VerifyRequest) -> VerifyResponse:
        names = req.suites if req.suites else list(SUITE_NAMES)
        unknown = [n for n in names if n not in SUITE_NAMES]
        if unknown:
            raise HTTPException(
                status_code=422,
                detail=f"unknown suites {unknown}; known: {list(SUITE_NAMES)}",
            )
        results = run_suites(names, req.seed)
        passed = sum(1 for r in results if r.passed)
        return VerifyResponse(
            suites=[SuiteOutcome(**r.to_json()) for r in results],
            passed=passed,
            total=len(results),
            summary=f"{passed}/{len(results)} identity suites passed",
        )

    return app


app = create_app()
