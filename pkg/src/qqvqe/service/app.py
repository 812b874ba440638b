"""FastAPI service exposing the simulator.

Stateless request/response endpoints over the core package; every
computation is fully determined by the request payload (seeds included),
so concurrent clients never interfere.
"""

from __future__ import annotations

from dataclasses import replace

from fastapi import FastAPI, HTTPException

from .. import experiments as core
from ..errors import (
    OutOfRangeError,
    QqvqeError,
    SingularGammaError,
    UnknownDistanceError,
    UnsupportedBasisError,
)
from ..hamiltonian import PUBLISHED_REFERENCE_E0_R09, builtin_table, ground_energy, lookup_distance
from ..qem import TomographyConfig, analytic_gamma, tomography
from ..qpu import setting_for_group, validate_detector
from . import schemas

ORACLE_NOTE = (
    "oracle_e0 is the exact minimum eigenvalue of the Hamiltonian built from "
    "the coefficient table; the published reference value for R=0.9 differs "
    "from it because the table is inconsistent with that reference under any "
    "Pauli sign convention (see README)."
)

app = FastAPI(
    title="qqvqe",
    description="Photonic ququart VQE simulator with Pauli noise and "
    "readout-style error mitigation",
    version="0.1.0",
)

_VALIDATION_ERRORS = (
    ValueError,
    OutOfRangeError,
    UnknownDistanceError,
    UnsupportedBasisError,
)


def _as_http(exc: Exception) -> HTTPException:
    if isinstance(exc, _VALIDATION_ERRORS):
        return HTTPException(status_code=400, detail=str(exc))
    if isinstance(exc, SingularGammaError):
        return HTTPException(status_code=500, detail=f"singular confusion matrix: {exc}")
    if isinstance(exc, QqvqeError):
        return HTTPException(status_code=500, detail=str(exc))
    raise exc


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/run", response_model=schemas.RunResponse)
def run(request: schemas.RunRequest) -> schemas.RunResponse:
    try:
        result = core.run_vqe(request.to_core())
    except Exception as exc:  # noqa: BLE001 - mapped to HTTP codes
        raise _as_http(exc) from exc
    return schemas.RunResponse.from_core(request, result)


@app.post("/curve", response_model=schemas.CurveResponse)
def curve(request: schemas.CurveRequest) -> schemas.CurveResponse:
    try:
        cfg = request.to_core()
        if request.distances is None:
            table = list(cfg.table) if cfg.table is not None else builtin_table()
            distances = [h.distance for h in table]
        else:
            distances = request.distances
        rows = core.dissociation_curve(cfg, distances)
    except Exception as exc:  # noqa: BLE001
        raise _as_http(exc) from exc
    return schemas.CurveResponse(
        config=request,
        rows=[
            schemas.CurveRow(R=r.distance, energy=r.energy, std=r.std,
                             oracle=r.oracle, success=r.success, n_evals=r.n_evals)
            for r in rows
        ],
    )


@app.post("/noise-sweep", response_model=schemas.SweepResponse)
def noise_sweep(request: schemas.SweepRequest) -> schemas.SweepResponse:
    try:
        rows = core.noise_sweep(
            request.to_core(), request.lambdas, request.tomography_repetitions
        )
    except Exception as exc:  # noqa: BLE001
        raise _as_http(exc) from exc
    return schemas.SweepResponse(
        config=request,
        rows=[
            schemas.SweepRow(
                lam=r.lam,
                lam_std=r.lam_std,
                E_unmitigated=r.energy_unmitigated,
                E_mitigated=r.energy_mitigated,
                E_expected_noisy=r.energy_expected_noisy,
                oracle=r.oracle,
            )
            for r in rows
        ],
    )


@app.post("/tomography", response_model=schemas.TomographyResponse)
def run_tomography(request: schemas.TomographyRequest) -> schemas.TomographyResponse:
    try:
        channel = request.noise.to_core() if request.noise is not None else None
        if channel is None:
            channel = core._identity_channel()
        gammas = []
        for index, basis in enumerate(("ZZ", "ZX", "XZ", "XX")):
            setting = setting_for_group(basis)
            det = None
            if request.detector is not None and basis in request.detector:
                det = validate_detector(
                    [[float(x) for x in row] for row in request.detector[basis]]
                )
            if request.analytic:
                gammas.append(analytic_gamma(channel, det, setting))
            else:
                cfg = TomographyConfig(
                    shots_per_eigenstate=request.shots_per_eigenstate,
                    seed=(request.seed, core._NS_TOMO, index),
                )
                gammas.append(tomography(channel, det, setting, cfg))
    except Exception as exc:  # noqa: BLE001
        raise _as_http(exc) from exc
    return schemas.TomographyResponse(
        gammas=[schemas.GammaModel.from_core(g) for g in gammas]
    )


@app.post("/bench-optimizers", response_model=schemas.BenchResponse)
def bench(request: schemas.BenchRequest) -> schemas.BenchResponse:
    try:
        rows = core.optimizer_benchmark(request.to_core(), request.trials, request.methods)
    except Exception as exc:  # noqa: BLE001
        raise _as_http(exc) from exc
    return schemas.BenchResponse(
        config=request,
        rows=[
            schemas.BenchRow(
                optimizer=r.optimizer,
                P_S=r.p_success,
                mean_evals=r.mean_evals,
                median_evals=r.median_evals,
                best_values=r.best_values,
                eval_counts=r.eval_counts,
            )
            for r in rows
        ],
    )


@app.post("/oracle", response_model=schemas.OracleResponse)
def oracle(table: list[schemas.TableRow] | None = None,
           r: float | None = None) -> schemas.OracleResponse:
    try:
        rows = [t.to_core() for t in table] if table else builtin_table()
        if r is not None:
            rows = [lookup_distance(rows, r)]
        out = [schemas.OracleRow(R=h.distance, oracle_e0=ground_energy(h)) for h in rows]
    except Exception as exc:  # noqa: BLE001
        raise _as_http(exc) from exc
    return schemas.OracleResponse(
        rows=out,
        published_reference_e0_r09=PUBLISHED_REFERENCE_E0_R09,
        note=ORACLE_NOTE,
    )
