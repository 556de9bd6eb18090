"""Random states, spectra and unitaries for cross-checks and randomized tests."""

from __future__ import annotations

import numpy as np

from .fock import DensityMatrix, PureState, dimension, manifold_slice
from .unpolarized import UnpolarizedSpectrum

__all__ = [
    "random_pure_state",
    "random_density_matrix",
    "random_unpolarized_spectrum",
    "random_unitary",
    "random_block_unitary",
]


def random_pure_state(
    cutoff: int, rng: np.random.Generator, manifold: int | None = None
) -> PureState:
    """Haar-random unit vector, optionally confined to one excitation manifold."""
    d = dimension(cutoff)
    amps = np.zeros(d, dtype=complex)
    if manifold is None:
        amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    else:
        sl = manifold_slice(manifold)
        amps[sl] = rng.standard_normal(manifold + 1) + 1j * rng.standard_normal(manifold + 1)
    return PureState(cutoff, amps / np.linalg.norm(amps))


def random_density_matrix(
    cutoff: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Hilbert-Schmidt-ensemble mixed state (Ginibre G G^dag, normalized)."""
    d = dimension(cutoff)
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return DensityMatrix(cutoff, rho / rho.trace().real, check_psd=False)


def random_unpolarized_spectrum(
    cutoff: int, rng: np.random.Generator
) -> UnpolarizedSpectrum:
    """Uniform (Dirichlet) manifold masses nu, converted to weights nu_N/(N+1)."""
    nu = rng.dirichlet(np.ones(cutoff + 1))
    return UnpolarizedSpectrum(cutoff, nu / np.arange(1, cutoff + 2))


def _haar(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary on an arbitrary dimension."""
    return _haar(dim, rng)


def random_block_unitary(cutoff: int, rng: np.random.Generator) -> np.ndarray:
    """Energy-preserving unitary: independently Haar on every manifold block."""
    d = dimension(cutoff)
    u = np.zeros((d, d), dtype=complex)
    for n in range(cutoff + 1):
        sl = manifold_slice(n)
        u[sl, sl] = _haar(n + 1, rng)
    return u
