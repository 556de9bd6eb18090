"""The unpolarized set and its closest member in the Hilbert-Schmidt sense.

A state invariant under every SU(2) polarization transformation is a direct
sum of multiples of the identity, one weight lambda_N per excitation
manifold, with sum_N (N+1) lambda_N = 1. That weight vector is the only
parametrization used anywhere in this package: optimizations over the
unpolarized set run over the lambda simplex, never over generic matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import (
    DEFAULT_TOL,
    DensityMatrix,
    PhotonNumberDistribution,
    Tolerances,
    dimension,
    manifold_slice,
    photon_distribution,
)

__all__ = [
    "UnpolarizedSpectrum",
    "to_density",
    "spectrum_purity",
    "is_unpolarized",
    "hs_closest",
]

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class UnpolarizedSpectrum:
    """Weights lambda_N of the identity blocks of an unpolarized state."""

    cutoff: int
    lambdas: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.shape != (self.cutoff + 1,):
            raise ValueError(
                f"expected {self.cutoff + 1} weights for cutoff {self.cutoff}"
            )
        if lam.min() < -self.tol.trace:
            raise ValueError(f"negative weight {lam.min():.3e}")
        lam = np.maximum(lam, 0.0)
        total = float(np.arange(1, self.cutoff + 2) @ lam)
        if abs(total - 1.0) > self.tol.trace:
            raise ValueError(f"trace constraint violated: sum (N+1) lambda_N = {total}")
        lam.setflags(write=False)
        object.__setattr__(self, "lambdas", lam)

    @property
    def weights(self) -> np.ndarray:
        """The multiplicities N+1 entering the trace constraint."""
        return np.arange(1, self.cutoff + 2, dtype=float)


def to_density(spec: UnpolarizedSpectrum) -> DensityMatrix:
    """Block-diagonal matrix with lambda_N times the identity on manifold N."""
    diag = np.concatenate(
        [np.full(n + 1, spec.lambdas[n]) for n in range(spec.cutoff + 1)]
    )
    return DensityMatrix(spec.cutoff, np.diag(diag).astype(complex),
                         tol=spec.tol, check_psd=False)


def spectrum_purity(spec: UnpolarizedSpectrum) -> float:
    """Purity of the corresponding state, sum_N (N+1) lambda_N^2."""
    return float(spec.weights @ (spec.lambdas**2))


def is_unpolarized(rho: DensityMatrix, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership test: block-diagonal with a scalar block per manifold.

    True iff every entry coupling different manifolds has modulus <= tol,
    every off-diagonal entry inside a manifold has modulus <= tol, and the
    diagonal inside each manifold is constant to within tol.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    a = rho.entries
    for n in range(rho.cutoff + 1):
        sl = manifold_slice(n)
        blk = a[sl, sl]
        off = blk - np.diag(np.diag(blk))
        if np.abs(off).max(initial=0.0) > tol:
            return False
        d = np.real(np.diag(blk))
        if d.max() - d.min() > tol:
            return False
        # everything to the right of this diagonal block couples manifolds
        if a.shape[0] > sl.stop and np.abs(a[sl, sl.stop:]).max(initial=0.0) > tol:
            return False
    return True


def hs_closest(rho: DensityMatrix) -> UnpolarizedSpectrum:
    """Spectrum of the unpolarized state nearest to rho in Hilbert-Schmidt distance.

    The minimizer has the closed form lambda_N = p_N / (N+1), where p is the
    photon number distribution of rho; the trace constraint then holds
    automatically.
    """
    p = photon_distribution(rho)
    lam = p.probs / np.arange(1, rho.cutoff + 2)
    return UnpolarizedSpectrum(rho.cutoff, lam, tol=rho.tol)
