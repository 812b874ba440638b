"""Waveplate parameterization of the ququart state.

The optical train: an incoming horizontally polarized photon passes H1 and
Q1, a polarizing beam displacer routes the H amplitude into path a and the
V amplitude into path b (where it is relabeled H), then H2/Q2 set the
polarization of path a and H3/Q3 that of path b.  Six angles
(H1, Q1, H2, Q2, H3, Q3) therefore span all four-dimensional pure states
up to global phase.
"""

from __future__ import annotations

import numpy as np

H_KET = np.array([1.0, 0.0], dtype=complex)


def hwp(theta: float) -> np.ndarray:
    """Jones matrix of a half waveplate with fast axis at angle theta."""
    c, s = np.cos(2.0 * theta), np.sin(2.0 * theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def qwp(theta: float) -> np.ndarray:
    """Jones matrix of a quarter waveplate with fast axis at angle theta."""
    c, s = np.cos(theta), np.sin(theta)
    f = np.exp(-1j * np.pi / 4.0)
    cross = (1.0 - 1j) * s * c
    return f * np.array(
        [[c * c + 1j * s * s, cross], [cross, s * s + 1j * c * c]]
    )


def prepare_ququart(angles) -> np.ndarray:
    """Ququart ket (aH, aV, bH, bV) prepared by the six waveplate angles.

    angles are ordered (H1, Q1, H2, Q2, H3, Q3), in radians.  The result is
    exactly unit norm up to floating point because every stage is unitary.
    """
    h1, q1, h2, q2, h3, q3 = np.asarray(angles, dtype=float)
    split = qwp(q1) @ hwp(h1) @ H_KET
    pol_a = qwp(q2) @ hwp(h2) @ H_KET
    pol_b = qwp(q3) @ hwp(h3) @ H_KET
    return np.array(
        [
            split[0] * pol_a[0],
            split[0] * pol_a[1],
            split[1] * pol_b[0],
            split[1] * pol_b[1],
        ]
    )


def random_angles(seed) -> np.ndarray:
    """Six i.i.d. angles uniform on [0, pi), deterministic per seed."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return rng.uniform(0.0, np.pi, 6)


def _fit_pair(target: np.ndarray) -> tuple[float, float]:
    """Angles (h, q) with qwp(q) hwp(h) |H> matching `target` up to phase.

    Coarse grid then a tight 2-d Nelder-Mead polish on the infidelity;
    the HWP+QWP pair covers the full polarization sphere, so the fit
    reaches infidelity ~1e-12 routinely.
    """
    target = target / np.linalg.norm(target)

    def infid(x):
        v = qwp(x[1]) @ hwp(x[0]) @ H_KET
        return 1.0 - abs(np.vdot(target, v)) ** 2

    grid = np.linspace(0.0, np.pi, 13)[:-1]
    best = min(((infid((h, q)), h, q) for h in grid for q in grid))
    x = np.array([best[1], best[2]])
    simplex = [x, x + np.array([0.2, 0.0]), x + np.array([0.0, 0.2])]
    fvals = [infid(p) for p in simplex]
    for _ in range(300):
        order = np.argsort(fvals)
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        if fvals[-1] < 1e-14:
            break
        centroid = 0.5 * (simplex[0] + simplex[1])
        xr = centroid + (centroid - simplex[2])
        fr = infid(xr)
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - simplex[2])
            fe = infid(xe)
            if fe < fr:
                simplex[2], fvals[2] = xe, fe
            else:
                simplex[2], fvals[2] = xr, fr
        elif fr < fvals[1]:
            simplex[2], fvals[2] = xr, fr
        else:
            xc = centroid + 0.5 * ((xr if fr < fvals[2] else simplex[2]) - centroid)
            fc = infid(xc)
            if fc < min(fr, fvals[2]):
                simplex[2], fvals[2] = xc, fc
            else:
                for i in (1, 2):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    fvals[i] = infid(simplex[i])
    return float(simplex[0][0]), float(simplex[0][1])


def solve_preparation_angles(target: np.ndarray) -> np.ndarray:
    """Six angles preparing `target` (unit ket) up to global phase.

    Decomposes the problem along the optical train: fit H2/Q2 and H3/Q3 to
    the per-path polarization states, then fit H1/Q1 to the required path
    amplitudes including the phases the per-path fits left behind.
    """
    target = np.asarray(target, dtype=complex)
    target = target / np.linalg.norm(target)
    pa = target[:2]
    pb = target[2:]
    na, nb = np.linalg.norm(pa), np.linalg.norm(pb)

    if na > 1e-12:
        h2, q2 = _fit_pair(pa)
    else:
        h2, q2 = 0.0, 0.0
    if nb > 1e-12:
        h3, q3 = _fit_pair(pb)
    else:
        h3, q3 = 0.0, 0.0

    ua = qwp(q2) @ hwp(h2) @ H_KET
    ub = qwp(q3) @ hwp(h3) @ H_KET
    # residual phases of the per-path fits
    ca = np.vdot(ua, pa) if na > 1e-12 else 0.0
    cb = np.vdot(ub, pb) if nb > 1e-12 else 0.0
    h1, q1 = _fit_pair(np.array([ca, cb], dtype=complex))
    return np.array([h1, q1, h2, q2, h3, q3])
