"""Stokes operators on the truncated space, their moments, and U(2) transformations.

Conventions: S0 = n_H + n_V, S1 = a_H^dag a_V + a_V^dag a_H,
S2 = i(a_H a_V^dag - a_H^dag a_V), S3 = n_H - n_V, so that
[S1, S2] = 2i S3 (and cyclic) and S3|N,k> = (2k - N)|N,k>. These are twice
the angular-momentum generators J = S/2 built from the manifold ladder
J+|N,k> = sqrt((k+1)(N-k)) |N,k+1>.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .fock import DensityMatrix, dimension, manifold_slice

__all__ = [
    "StokesMoments",
    "stokes_matrix",
    "stokes_moments",
    "semiclassical_degree",
    "polarization_unitary",
    "apply_unitary",
]


@functools.lru_cache(maxsize=None)
def _ladder_plus(cutoff: int) -> np.ndarray:
    """J+ on the truncated space (block-diagonal over manifolds)."""
    d = dimension(cutoff)
    out = np.zeros((d, d), dtype=complex)
    for n in range(cutoff + 1):
        base = n * (n + 1) // 2
        for k in range(n):
            out[base + k + 1, base + k] = np.sqrt((k + 1) * (n - k))
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def stokes_matrix(which: str, cutoff: int) -> np.ndarray:
    """Dense Hermitian matrix of the Stokes operator ``which`` in {S0,S1,S2,S3}.

    The result is cached per (which, cutoff) and returned as a read-only array.
    """
    d = dimension(cutoff)
    if which == "S0":
        diag = np.concatenate([np.full(n + 1, float(n)) for n in range(cutoff + 1)])
        m = np.diag(diag).astype(complex)
    elif which == "S3":
        diag = np.concatenate(
            [np.array([2.0 * k - n for k in range(n + 1)]) for n in range(cutoff + 1)]
        )
        m = np.diag(diag).astype(complex)
    elif which in ("S1", "S2"):
        jp = _ladder_plus(cutoff)
        jm = jp.conj().T
        # S = 2J, and S1 + i S2 = 2 J+
        m = (jp + jm) if which == "S1" else 1j * (jm - jp)
    else:
        raise ValueError(f"unknown Stokes operator {which!r}")
    if m.shape != (d, d):  # pragma: no cover
        raise AssertionError("operator dimension mismatch")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class StokesMoments:
    """First moments of the Stokes operators and the summed variance."""

    s0: float
    svec: tuple[float, float, float]
    variance_sum: float

    @property
    def svec_norm(self) -> float:
        return float(np.linalg.norm(self.svec))


def _expect(rho: DensityMatrix, op: np.ndarray) -> float:
    # Tr(rho op) = sum_ij conj(rho_ij) op_ij for Hermitian rho
    return float(np.vdot(rho.entries, op).real)


def stokes_moments(rho: DensityMatrix) -> StokesMoments:
    """Means of S0..S3 and the total variance of the Stokes vector."""
    s0 = _expect(rho, stokes_matrix("S0", rho.cutoff))
    means = []
    var = 0.0
    for name in ("S1", "S2", "S3"):
        op = stokes_matrix(name, rho.cutoff)
        mean = _expect(rho, op)
        second = _expect(rho, np.asarray(op @ op))
        means.append(mean)
        var += second - mean * mean
    return StokesMoments(s0=s0, svec=tuple(means), variance_sum=max(var, 0.0))


def semiclassical_degree(rho: DensityMatrix) -> float:
    """|<S>| / <S0>, the Stokes-vector based degree; undefined for the vacuum."""
    m = stokes_moments(rho)
    if m.s0 <= 0.0:
        raise ValueError("semiclassical degree undefined for vacuum")
    return min(1.0, m.svec_norm / m.s0)


def polarization_unitary(
    axis: np.ndarray, angle: float, phase0: float, cutoff: int
) -> np.ndarray:
    """U = exp(-i (angle/2) axis.S) exp(-i phase0 S0), an energy-preserving unitary.

    ``axis`` must be a unit 3-vector. The generator is Hermitian and
    block-diagonal over manifolds, so the exponential is computed exactly by
    eigendecomposition and the result is block-diagonal as well.
    """
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1.0) > 1e-12:
        raise ValueError("axis must be a unit 3-vector")
    gen = (angle / 2.0) * (
        axis[0] * stokes_matrix("S1", cutoff)
        + axis[1] * stokes_matrix("S2", cutoff)
        + axis[2] * stokes_matrix("S3", cutoff)
    )
    w, v = np.linalg.eigh(gen)
    u_rot = (v * np.exp(-1j * w)) @ v.conj().T
    n_diag = np.concatenate([np.full(n + 1, float(n)) for n in range(cutoff + 1)])
    return u_rot * np.exp(-1j * phase0 * n_diag)[np.newaxis, :]


def apply_unitary(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    """Conjugate rho by a unitary of matching dimension."""
    u = np.asarray(u, dtype=complex)
    if u.shape != rho.entries.shape:
        raise ValueError("unitary dimension does not match state dimension")
    out = u @ rho.entries @ u.conj().T
    # conjugation of a valid state stays positive; skip the eigenvalue check
    return DensityMatrix(rho.cutoff, out, tol=rho.tol, check_psd=False)
