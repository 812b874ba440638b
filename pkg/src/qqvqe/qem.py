"""Measurement-error-style mitigation of Pauli-channel noise.

For each measurement setting the combined effect of the channel and any
detector confusion on outcome probabilities is a left-stochastic 4x4
matrix (the channel part alone is doubly stochastic).  That matrix is
estimated by preparing the setting's eigenstates and reading them out
through the noisy pipeline, or computed analytically; mitigation inverts
it and, when the inverse leaves the probability simplex, projects back by
Euclidean distance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularGammaError
from .linalg import outer
from .qpu import (
    MeasurementSetting,
    PauliChannel,
    apply_channel,
    ideal_probs,
    sample_outcomes,
)

DET_TOLERANCE = 1e-10
COLUMN_SUM_TOL = 1e-9


@dataclass(frozen=True)
class GammaMatrix:
    """Per-setting confusion matrix; entries[outcome, prepared].

    Stored so that q = Gamma p maps noiseless outcome probabilities p to
    measured ones q; columns sum to 1 (left stochastic).
    """

    setting: str
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("gamma matrix must be 4x4")
        if m.min() < -1e-12 or m.max() > 1.0 + 1e-9:
            raise ValueError("gamma entries must lie in [0, 1]")
        colsums = m.sum(axis=0)
        if np.max(np.abs(colsums - 1.0)) > COLUMN_SUM_TOL:
            raise ValueError(f"gamma columns must sum to 1, got {colsums}")
        object.__setattr__(self, "entries", m)


@dataclass(frozen=True)
class TomographyConfig:
    shots_per_eigenstate: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.shots_per_eigenstate < 1:
            raise ValueError("shots_per_eigenstate must be >= 1")


def _det4(m: np.ndarray) -> tuple[float, np.ndarray]:
    """Determinant and row-reduced system by Gaussian elimination.

    Returns (det, augmented) where augmented is the upper-triangularized
    [m | I] used by `_solve4`.  Partial pivoting keeps this stable for the
    well-scaled matrices that appear here.
    """
    n = m.shape[0]
    aug = np.hstack([m.astype(float), np.eye(n)])
    det = 1.0
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(aug[col:, col])))
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
            det = -det
        piv = aug[col, col]
        det *= piv
        if piv == 0.0:
            return 0.0, aug
        aug[col] = aug[col] / piv
        for row in range(n):
            if row != col and aug[row, col] != 0.0:
                aug[row] -= aug[row, col] * aug[col]
    return det, aug


def gamma_determinant(gamma: GammaMatrix) -> float:
    det, _ = _det4(gamma.entries)
    return det


def _solve4(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    det, aug = _det4(m)
    if abs(det) <= DET_TOLERANCE:
        raise SingularGammaError(f"|det| = {abs(det):.3e} <= {DET_TOLERANCE:.1e}")
    return aug[:, 4:] @ rhs


def analytic_gamma(channel: PauliChannel, detector: np.ndarray | None,
                   setting: MeasurementSetting) -> GammaMatrix:
    """Exact confusion matrix Lambda . Delta for one setting.

    Delta[l, k] is the probability of outcome l after the channel acts on
    the k-th prepared eigenstate; it is verified doubly stochastic within
    1e-10 before composing with the detector matrix.
    """
    delta = np.zeros((4, 4))
    for k in range(4):
        rho = apply_channel(outer(setting.eigenkets[:, k]), channel)
        delta[:, k] = ideal_probs(rho, setting)
    rowsums = delta.sum(axis=1)
    colsums = delta.sum(axis=0)
    if np.max(np.abs(rowsums - 1.0)) > 1e-10 or np.max(np.abs(colsums - 1.0)) > 1e-10:
        raise ValueError(
            f"channel transition matrix not doubly stochastic: "
            f"row sums {rowsums}, column sums {colsums}"
        )
    gamma = delta if detector is None else np.asarray(detector, dtype=float) @ delta
    return GammaMatrix(setting.basis, gamma)


def tomography(channel: PauliChannel, detector: np.ndarray | None,
               setting: MeasurementSetting, cfg: TomographyConfig) -> GammaMatrix:
    """Finite-shot confusion matrix from eigenstate preparations.

    Column k holds the relative outcome frequencies observed after
    preparing eigenket k, evolving under the channel and reading out
    through the detector; each column sums to exactly 1.
    """
    entries = np.zeros((4, 4))
    for k in range(4):
        rho = apply_channel(outer(setting.eigenkets[:, k]), channel)
        p = ideal_probs(rho, setting)
        if detector is not None:
            p = np.asarray(detector, dtype=float) @ p
        hist = sample_outcomes(p, cfg.shots_per_eigenstate, (cfg.seed, k))
        entries[:, k] = hist.counts / cfg.shots_per_eigenstate
    return GammaMatrix(setting.basis, entries)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {p >= 0, sum p = 1} (sort and threshold)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u)
    ranks = np.arange(1, v.size + 1)
    cond = u + (1.0 - cssv) / ranks > 0
    rho = int(np.nonzero(cond)[0][-1])
    lam = (1.0 - cssv[rho]) / (rho + 1.0)
    return np.maximum(v + lam, 0.0)


def mitigate(gamma: GammaMatrix, p_exp: np.ndarray) -> np.ndarray:
    """Invert the confusion matrix; fall back to simplex projection.

    Returns Gamma^-1 p when that is already a probability vector (up to a
    1e-12 negativity allowance for floating point noise); otherwise its
    Euclidean projection onto the simplex.  Raises SingularGammaError for
    |det| <= 1e-10, which corresponds to maximally depolarizing or
    completely dephasing noise.
    """
    p_exp = np.asarray(p_exp, dtype=float)
    x = _solve4(gamma.entries, p_exp)
    if x.min() >= -1e-12 and abs(x.sum() - 1.0) <= 1e-9:
        x = np.clip(x, 0.0, None)
        return x / x.sum()
    return project_simplex(x)


def gamma_to_dict(gamma: GammaMatrix) -> dict:
    """JSON-ready form: setting label plus 16 entries in column-major order."""
    return {
        "setting": gamma.setting,
        "entries_column_major": [float(x) for x in gamma.entries.flatten(order="F")],
    }


def gamma_from_dict(data: dict) -> GammaMatrix:
    entries = np.array(data["entries_column_major"], dtype=float).reshape((4, 4), order="F")
    return GammaMatrix(data["setting"], entries)


def save_gammas(gammas: list[GammaMatrix], path) -> None:
    with open(path, "w") as fh:
        json.dump({"gammas": [gamma_to_dict(g) for g in gammas]}, fh, indent=2)
        fh.write("\n")


def load_gammas(path) -> list[GammaMatrix]:
    with open(path) as fh:
        data = json.load(fh)
    return [gamma_from_dict(d) for d in data["gammas"]]
