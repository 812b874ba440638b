"""Pydantic request/response models for the HTTP service.

These mirror the core dataclasses with JSON-friendly field types (matrices
as nested lists, Hamiltonian tables as row objects) and carry all
conversion logic to and from the core types.
"""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import experiments as core
from ..hamiltonian import HAMILTONIAN_STRINGS, MolecularHamiltonian
from ..optim import OptimizerConfig
from ..qem import GammaMatrix
from ..qpu import PauliChannel, depolarizing_polarization


class TableRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    R: float = Field(gt=0)
    II: float
    IZ: float
    ZI: float
    ZZ: float
    IX: float
    ZX: float
    XI: float
    XZ: float
    XX: float

    def to_core(self) -> MolecularHamiltonian:
        return MolecularHamiltonian(
            self.R, {s: getattr(self, s) for s in HAMILTONIAN_STRINGS}
        )


class NoiseSpec(BaseModel):
    """Either a depolarizing strength or a full 4x4 Pauli probability table."""

    model_config = ConfigDict(extra="forbid")

    depolarizing_lambda: float | None = Field(default=None, ge=0.0, le=1.0)
    probs: list[list[float]] | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.depolarizing_lambda is None) == (self.probs is None):
            raise ValueError("specify exactly one of depolarizing_lambda or probs")
        return self

    def to_core(self) -> PauliChannel:
        if self.depolarizing_lambda is not None:
            return depolarizing_polarization(self.depolarizing_lambda)
        return PauliChannel(np.array(self.probs, dtype=float))


class OptimizerSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    method: Literal["nelder-mead", "powell", "cobyla"] = "cobyla"
    ftol: float = Field(default=0.01, gt=0)
    max_evals: int = Field(default=300, ge=1)
    initial_step: float = Field(default=0.3, gt=0)

    def to_core(self) -> OptimizerConfig:
        return OptimizerConfig(
            method=self.method,
            ftol=self.ftol,
            max_evals=self.max_evals,
            initial_step=self.initial_step,
        )


class GammaModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    setting: Literal["ZZ", "ZX", "XZ", "XX"]
    entries_column_major: list[float] = Field(min_length=16, max_length=16)

    def to_core(self) -> GammaMatrix:
        entries = np.array(self.entries_column_major, dtype=float).reshape((4, 4), order="F")
        return GammaMatrix(self.setting, entries)

    @classmethod
    def from_core(cls, gamma: GammaMatrix) -> "GammaModel":
        return cls(
            setting=gamma.setting,
            entries_column_major=[float(x) for x in gamma.entries.flatten(order="F")],
        )


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    distance: float = Field(default=0.9, gt=0)
    shots_per_setting: int = Field(default=4000, ge=1)
    noise: NoiseSpec | None = None
    detector: dict[Literal["ZZ", "ZX", "XZ", "XX"], list[list[float]]] | None = None
    qem: bool = False
    gamma_source: Literal["analytic", "tomography"] = "analytic"
    gammas: list[GammaModel] | None = None
    tomography_shots: int = Field(default=10_000, ge=1)
    optimizer: OptimizerSpec = Field(default_factory=OptimizerSpec)
    seed: int = 0
    mode: Literal["sampled", "analytic"] = "sampled"
    table: list[TableRow] | None = None

    def to_core(self) -> core.VqeConfig:
        detector = None
        if self.detector is not None:
            detector = {k: np.array(v, dtype=float) for k, v in self.detector.items()}
        return core.VqeConfig(
            distance=self.distance,
            shots_per_setting=self.shots_per_setting,
            channel=self.noise.to_core() if self.noise is not None else None,
            detector=detector,
            qem=self.qem,
            gamma_source=self.gamma_source,
            gammas=tuple(g.to_core() for g in self.gammas) if self.gammas else None,
            tomography_shots=self.tomography_shots,
            optimizer=self.optimizer.to_core(),
            seed=self.seed,
            mode=self.mode,
            table=tuple(r.to_core() for r in self.table) if self.table else None,
        )


class TracePoint(BaseModel):
    theta: list[float]
    energy: float


class RunResponse(BaseModel):
    config: RunRequest
    trace: list[TracePoint]
    final_energy: float
    final_std: float
    oracle_e0: float
    best_energy: float
    best_theta: list[float]
    success: bool
    converged: bool
    n_evals: int
    qpu_calls_shots: int
    gammas: list[GammaModel] | None = None

    @classmethod
    def from_core(cls, request: RunRequest, res: core.VqeRunResult) -> "RunResponse":
        return cls(
            config=request,
            trace=[TracePoint(theta=[float(t) for t in th], energy=float(e))
                   for th, e in res.trace],
            final_energy=res.final_energy,
            final_std=res.final_std,
            oracle_e0=res.oracle_e0,
            best_energy=res.best_energy,
            best_theta=[float(t) for t in res.best_theta],
            success=res.success,
            converged=res.converged,
            n_evals=res.n_evals,
            qpu_calls_shots=res.qpu_calls_shots,
            gammas=[GammaModel.from_core(g) for g in res.gammas] if res.gammas else None,
        )


class CurveRequest(RunRequest):
    distances: list[float] | None = None  # default: every distance in the table


class CurveRow(BaseModel):
    R: float
    energy: float
    std: float
    oracle: float
    success: bool
    n_evals: int


class CurveResponse(BaseModel):
    config: CurveRequest
    rows: list[CurveRow]


class SweepRequest(RunRequest):
    lambdas: list[float] = Field(default_factory=lambda: [0.1, 0.2, 0.4, 0.8])
    tomography_repetitions: int = Field(default=5, ge=1)


class SweepRow(BaseModel):
    lam: float = Field(serialization_alias="lambda")
    lam_std: float = Field(serialization_alias="lambda_std")
    E_unmitigated: float
    E_mitigated: float
    E_expected_noisy: float
    oracle: float


class SweepResponse(BaseModel):
    config: SweepRequest
    rows: list[SweepRow]


class TomographyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    noise: NoiseSpec | None = None
    detector: dict[Literal["ZZ", "ZX", "XZ", "XX"], list[list[float]]] | None = None
    shots_per_eigenstate: int = Field(default=10_000, ge=1)
    seed: int = 0
    analytic: bool = False


class TomographyResponse(BaseModel):
    gammas: list[GammaModel]


class BenchRequest(RunRequest):
    trials: int = Field(default=1000, ge=1)
    methods: list[Literal["nelder-mead", "powell", "cobyla"]] | None = None


class BenchRow(BaseModel):
    optimizer: str
    P_S: float
    mean_evals: float
    median_evals: float
    best_values: list[float]
    eval_counts: list[int]


class BenchResponse(BaseModel):
    config: BenchRequest
    rows: list[BenchRow]


class OracleRow(BaseModel):
    R: float
    oracle_e0: float


class OracleResponse(BaseModel):
    rows: list[OracleRow]
    published_reference_e0_r09: float
    note: str
