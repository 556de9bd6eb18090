"""Internal Hermitian-matrix helpers shared by the metric and degree modules."""

from __future__ import annotations

import numpy as np

PSD_CLAMP = 1e-10  # eigenvalues above -PSD_CLAMP are clamped to 0, below it is an error


def hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2.0


def psd_eigh(a: np.ndarray, clamp: float = PSD_CLAMP) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a nominally PSD Hermitian matrix.

    Small negative eigenvalues (roundoff) are clamped to 0; anything below
    -clamp raises, so downstream square roots can never go complex.
    """
    w, v = np.linalg.eigh(hermitize(a))
    if w[0] < -clamp:
        raise ValueError(f"matrix is not positive semidefinite (min eig {w[0]:.3e})")
    return np.maximum(w, 0.0), v


def psd_sqrt(a: np.ndarray, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix via eigendecomposition."""
    w, v = psd_eigh(a, clamp)
    return (v * np.sqrt(w)) @ v.conj().T


def trace_sqrt_psd(a: np.ndarray, clamp: float = PSD_CLAMP) -> float:
    """Tr(sqrt(a)) for PSD Hermitian a."""
    w, _ = psd_eigh(a, clamp)
    return float(np.sqrt(w).sum())
