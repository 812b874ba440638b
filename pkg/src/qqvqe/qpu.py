"""Simulated quantum processing unit.

Covers the four joint Pauli measurement settings, Pauli-channel noise on
the two degrees of freedom, projective outcome probabilities, seeded
finite-shot sampling and Pauli-expectation estimation, plus the Hoeffding
tail bound used to pick the shot budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRangeError, UnsupportedBasisError
from .linalg import PAULI_LABELS, pauli_matrix, two_qubit_operator

MEASUREMENT_BASES = ("ZZ", "ZX", "XZ", "XX")

_EIGVECS = {
    # +1 eigenstate first, then -1
    "Z": (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)),
    "X": (
        np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
        np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    ),
}


@dataclass(frozen=True)
class MeasurementSetting:
    """Joint eigenbasis of one nondegenerate two-qubit Pauli observable.

    ``eigenkets`` holds the four eigenkets as columns; outcome ordering is
    polarization-major with the +1 eigenstate first, i.e. outcome
    2*i_pol + i_path corresponds to the (i_pol, i_path) pair of
    single-qubit eigenstates.  ``sign_table`` maps every Pauli string that
    is diagonal in this basis to its four outcome eigenvalues.
    """

    basis: str
    eigenkets: np.ndarray = field(repr=False)
    sign_table: dict[str, np.ndarray] = field(repr=False)


def setting_for_group(basis: str) -> MeasurementSetting:
    """Measurement setting for one of the joint bases ZZ, ZX, XZ, XX."""
    if basis not in MEASUREMENT_BASES:
        raise UnsupportedBasisError(
            f"basis {basis!r} not supported; expected one of {MEASUREMENT_BASES}"
        )
    pol_letter, path_letter = basis[0], basis[1]
    kets = []
    for i_pol in range(2):
        for i_path in range(2):
            # path is the slow tensor factor under the (aH, aV, bH, bV) order
            kets.append(np.kron(_EIGVECS[path_letter][i_path], _EIGVECS[pol_letter][i_pol]))
    eigenkets = np.stack(kets, axis=1)
    sign_table = {}
    for a in ("I", pol_letter):
        for b in ("I", path_letter):
            signs = []
            for i_pol in range(2):
                for i_path in range(2):
                    sa = 1.0 if a == "I" else 1.0 - 2.0 * i_pol
                    sb = 1.0 if b == "I" else 1.0 - 2.0 * i_path
                    signs.append(sa * sb)
            sign_table[a + b] = np.array(signs)
    return MeasurementSetting(basis, eigenkets, sign_table)


@dataclass(frozen=True)
class PauliChannel:
    """Two-qubit Pauli channel given by a 4x4 probability table.

    ``probs[j, k]`` is the probability that Pauli j acts on the
    polarization qubit and Pauli k on the path qubit (indices follow
    I, X, Y, Z).
    """

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (4, 4):
            raise ValueError("channel probability table must be 4x4")
        if p.min() < 0:
            raise ValueError("channel probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"channel probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", p)

    def kraus_terms(self):
        """Nonzero (probability, 4x4 Pauli operator) pairs."""
        terms = []
        for j, a in enumerate(PAULI_LABELS):
            for k, b in enumerate(PAULI_LABELS):
                if self.probs[j, k] > 0.0:
                    terms.append(
                        (self.probs[j, k],
                         two_qubit_operator(pauli_matrix(a), pauli_matrix(b)))
                    )
        return terms


def identity_channel() -> PauliChannel:
    p = np.zeros((4, 4))
    p[0, 0] = 1.0
    return PauliChannel(p)


def depolarizing_polarization(lam: float) -> PauliChannel:
    """Depolarizing noise of strength lam acting on the polarization qubit.

    rho_pol -> (1 - lam) rho_pol + lam I/2, expressed as the Pauli table
    p[0,0] = 1 - 3 lam/4 and p[j,0] = lam/4 for j in {X, Y, Z}.
    """
    if not 0.0 <= lam <= 1.0:
        raise OutOfRangeError(f"depolarizing strength must be in [0, 1], got {lam}")
    p = np.zeros((4, 4))
    p[0, 0] = 1.0 - 0.75 * lam
    p[1, 0] = p[2, 0] = p[3, 0] = lam / 4.0
    return PauliChannel(p)


def apply_channel(rho: np.ndarray, channel: PauliChannel) -> np.ndarray:
    """Kraus sum of the channel applied to a density matrix."""
    out = np.zeros_like(rho, dtype=complex)
    for p, op in channel.kraus_terms():
        out += p * (op @ rho @ op.conj().T)
    return out


def ideal_probs(rho: np.ndarray, setting: MeasurementSetting) -> np.ndarray:
    """Outcome probabilities <e_l| rho |e_l> for the setting's eigenkets.

    Tiny negative values from floating point are clipped to zero; the sum
    stays within 1e-12 of the trace of rho.
    """
    e = setting.eigenkets
    p = np.real(np.einsum("li,ij,jl->l", e.conj().T, rho, e))
    return np.clip(p, 0.0, None)


def validate_detector(matrix: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Check a detector confusion matrix is left stochastic; returns it."""
    m = np.asarray(matrix, dtype=float)
    if m.shape != (4, 4):
        raise ValueError("detector matrix must be 4x4")
    if m.min() < -tol:
        raise ValueError("detector matrix entries must be nonnegative")
    colsums = m.sum(axis=0)
    if np.max(np.abs(colsums - 1.0)) > tol:
        raise ValueError(f"detector columns must sum to 1, got {colsums}")
    return m


@dataclass(frozen=True)
class OutcomeHistogram:
    """Counts of the four outcomes of one measurement setting."""

    counts: np.ndarray
    shots: int

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=int)
        if c.shape != (4,) or c.min() < 0:
            raise ValueError("counts must be 4 nonnegative integers")
        if int(c.sum()) != self.shots or self.shots < 1:
            raise ValueError("counts must sum to shots >= 1")
        object.__setattr__(self, "counts", c)


def sample_outcomes(p: np.ndarray, shots: int, seed) -> OutcomeHistogram:
    """Multinomial draw by inverse CDF with a counter-based generator.

    ``seed`` may be an int or a tuple of ints; identical (p, shots, seed)
    reproduce the histogram bit-for-bit.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = np.asarray(p, dtype=float)
    if p.min() < 0:
        raise ValueError("probabilities must be nonnegative")
    total = p.sum()
    if not np.isfinite(total) or total <= 0:
        raise ValueError("probabilities must have positive finite sum")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    u = rng.random(shots)
    cum = np.cumsum(p / total)
    idx = np.minimum(np.searchsorted(cum, u, side="right"), 3)
    counts = np.bincount(idx, minlength=4)
    return OutcomeHistogram(counts, shots)


def pauli_estimates_from_probs(p: np.ndarray, setting: MeasurementSetting) -> dict[str, float]:
    """Signed sums sign_table[P] . p for every string the setting covers."""
    return {s: float(signs @ p) for s, signs in setting.sign_table.items()}


def estimate_paulis(hist: OutcomeHistogram, setting: MeasurementSetting) -> dict[str, float]:
    """Pauli expectation estimates from a finite-shot histogram."""
    return pauli_estimates_from_probs(hist.counts / hist.shots, setting)


def hoeffding_bound(shots: int, t: float) -> float:
    """Two-sided Hoeffding tail bound 2 exp(-M t^2 / 2), clamped to [0, 1]."""
    if shots < 1:
        raise OutOfRangeError("shots must be >= 1")
    if t <= 0:
        raise OutOfRangeError("t must be positive")
    return min(1.0, 2.0 * math.exp(-shots * t * t / 2.0))
