"""Dense complex linear algebra for the 2- and 4-dimensional Hilbert spaces.

Basis convention used everywhere in this package: the four levels of the
ququart are ordered (aH, aV, bH, bV), i.e. index = 2 * path + polarization
with path a=0/b=1 and polarization H=0/V=1.  The first letter of a
two-letter Pauli string acts on the polarization qubit, the second on the
path qubit.  Because the polarization index is the fast (rightmost) tensor
factor under this ordering, the 4x4 matrix of a string "PQ" is
kron(sigma_Q, sigma_P); `two_qubit_operator` is the single chokepoint that
encodes this.
"""

from __future__ import annotations

import numpy as np

from .errors import NotHermitianError

PAULI_LABELS = ("I", "X", "Y", "Z")

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

PAULI_STRINGS = tuple(a + b for a in PAULI_LABELS for b in PAULI_LABELS)

HERMITIAN_TOL = 1e-10


def pauli_matrix(label: str) -> np.ndarray:
    """2x2 matrix of a single Pauli label (one of I, X, Y, Z)."""
    try:
        return _PAULI[label].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}") from None


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 operators."""
    return np.kron(a, b)


def two_qubit_operator(op_pol: np.ndarray, op_path: np.ndarray) -> np.ndarray:
    """4x4 operator acting as op_pol on polarization and op_path on the path.

    Polarization is the fast index under the (aH, aV, bH, bV) ordering, so
    the path factor goes first in the Kronecker product.
    """
    return np.kron(op_path, op_pol)


def string_matrix(string: str) -> np.ndarray:
    """4x4 matrix of a two-letter Pauli string (first letter: polarization)."""
    if len(string) != 2 or string[0] not in _PAULI or string[1] not in _PAULI:
        raise ValueError(f"invalid Pauli string {string!r}")
    return two_qubit_operator(_PAULI[string[0]], _PAULI[string[1]])


def is_hermitian(op: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(op - op.conj().T)) < tol)


def require_hermitian(op: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    dev = float(np.max(np.abs(op - op.conj().T)))
    if dev >= tol:
        raise NotHermitianError(f"max |A - A^dag| = {dev:.3e} >= {tol:.1e}")


def is_unitary(op: np.ndarray, tol: float = 1e-10) -> bool:
    eye = np.eye(op.shape[0])
    return bool(np.max(np.abs(op.conj().T @ op - eye)) < tol)


def outer(ket: np.ndarray) -> np.ndarray:
    """Rank-one density matrix |ket><ket|."""
    return np.outer(ket, ket.conj())


def expectation(op: np.ndarray, rho: np.ndarray) -> float:
    """tr(op rho) for Hermitian op; raises if op is not Hermitian.

    The imaginary residue of the trace is checked to be < 1e-10.
    """
    require_hermitian(op)
    val = complex(np.trace(op @ rho))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def eig_hermitian(op: np.ndarray, tol: float = HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Returns (eigenvalues ascending, eigenvectors as columns).  Rotations are
    applied until the largest off-diagonal magnitude falls below 1e-14 times
    the matrix scale, which leaves residuals far inside the 1e-8 contract.
    """
    require_hermitian(op, tol)
    n = op.shape[0]
    a = np.array(op, dtype=complex)
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(float(np.max(np.abs(a))), 1.0)
    for _ in range(100):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
        if off < 1e-14 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-18 * scale:
                    continue
                phase = apq / abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                diff = aqq - app
                if abs(diff) < 1e-30:
                    t = 1.0
                else:
                    tau = diff / (2.0 * abs(apq))
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[q, q] = c
                j[p, q] = s * phase
                j[q, p] = -s * np.conj(phase)
                a = j.conj().T @ a @ j
                v = v @ j
    vals = np.real(np.diag(a))
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def random_ket(dim: int, seed) -> np.ndarray:
    """Haar-ish random unit vector, deterministic per seed."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def random_density_matrix(dim: int, seed) -> np.ndarray:
    """Random full-rank density matrix (Ginibre construction)."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
