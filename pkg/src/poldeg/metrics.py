"""Distances and overlaps between density matrices.

Conventions used throughout the package:

* ``hs_distance`` is the squared Hilbert-Schmidt norm Tr[(rho-sigma)^2],
  ranging over [0, 2] for unit-trace states.
* ``fidelity`` is the squared-trace (Uhlmann transition probability) form
  [Tr sqrt(sqrt(sigma) rho sqrt(sigma))]^2; its square root is taken only
  where a formula explicitly needs it. Both conventions circulate in the
  literature, so the choice is pinned here once.
* ``bures_distance`` is 2 (1 - sqrt(fidelity)).
* ``relative_entropy`` uses natural logarithms and raises when the support
  condition fails instead of returning infinity.
"""

from __future__ import annotations

import numpy as np

from ._linalg import hermitize, psd_eigh, psd_sqrt, trace_sqrt_psd
from .fock import DensityMatrix

__all__ = [
    "hs_distance",
    "fidelity",
    "sqrt_fidelity",
    "bures_distance",
    "relative_entropy",
    "discrete_distance",
]

SUPPORT_EIG_TOL = 1e-12


def _check_dims(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.entries.shape != sigma.entries.shape:
        raise ValueError("states live on different truncated spaces")


def hs_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Squared Hilbert-Schmidt distance Tr[(rho - sigma)^2]."""
    _check_dims(rho, sigma)
    diff = rho.entries - sigma.entries
    return float(np.vdot(diff, diff).real)


def sqrt_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr sqrt(sqrt(sigma) rho sqrt(sigma)), clipped into [0, 1]."""
    _check_dims(rho, sigma)
    s_half = psd_sqrt(sigma.entries)
    inner = hermitize(s_half @ rho.entries @ s_half)
    return min(1.0, trace_sqrt_psd(inner))


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann transition probability [Tr sqrt(sqrt(sigma) rho sqrt(sigma))]^2."""
    return sqrt_fidelity(rho, sigma) ** 2


def bures_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """2 (1 - sqrt(F)), in [0, 2]."""
    return 2.0 * (1.0 - sqrt_fidelity(rho, sigma))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr[rho (ln rho - ln sigma)] with the 0 ln 0 = 0 convention.

    Requires support(rho) included in support(sigma); eigenvalues at or below
    ``SUPPORT_EIG_TOL`` count as zero. Violations raise instead of returning
    an infinite sentinel.
    """
    _check_dims(rho, sigma)
    r, u = psd_eigh(rho.entries)
    s, v = psd_eigh(sigma.entries)

    kernel = v[:, s <= SUPPORT_EIG_TOL]
    if kernel.size:
        # mass of rho inside the kernel of sigma
        leak = float(np.einsum("ij,jk,ki->", kernel.conj().T, rho.entries, kernel).real)
        if leak > SUPPORT_EIG_TOL:
            raise ValueError("relative entropy infinite")

    r_pos = r[r > SUPPORT_EIG_TOL]
    ent_rho = float(r_pos @ np.log(r_pos))
    support = s > SUPPORT_EIG_TOL
    # <v_j| rho |v_j> for sigma eigenvectors on the support
    overl = np.real(np.einsum("ij,jk,ki->i", v.conj().T, rho.entries, v))
    cross = float(overl[support] @ np.log(s[support]))
    return max(0.0, ent_rho - cross)


def discrete_distance(rho: DensityMatrix, sigma: DensityMatrix, tol: float) -> int:
    """0 if the states agree entrywise to within tol, else 1."""
    _check_dims(rho, sigma)
    return 0 if np.abs(rho.entries - sigma.entries).max() <= tol else 1
