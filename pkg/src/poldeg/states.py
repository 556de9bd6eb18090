"""Factories for the state families the degree measures are evaluated on."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import (
    BasisLabel,
    DensityMatrix,
    PureState,
    basis_index,
    dimension,
    manifold_slice,
)

__all__ = [
    "fock_state",
    "su2_coherent",
    "CoherentSpec",
    "TruncatedCoherent",
    "two_mode_coherent",
    "diagonal_mixture",
]

DEFAULT_TAIL_TOL = 1e-12
MAX_COHERENT_CUTOFF = 200


def fock_state(n: int, k: int, cutoff: int) -> PureState:
    """|n,k> = |k>_H |n-k>_V as a pure state at the given cutoff."""
    if not 0 <= k <= n <= cutoff:
        raise ValueError(f"fock state (n={n}, k={k}) out of range for cutoff {cutoff}")
    amps = np.zeros(dimension(cutoff), dtype=complex)
    amps[basis_index(BasisLabel(n, k), cutoff)] = 1.0
    return PureState(cutoff, amps)


def su2_coherent(n: int, theta: float, phi: float, cutoff: int) -> PureState:
    """Spin-coherent superposition within manifold n.

    Amplitude on |n,k> is binom(n,k)^(1/2) sin(theta/2)^(n-k) cos(theta/2)^k
    e^{-ik phi}; at theta = 0 this concentrates on k = n (all photons in H),
    at theta = pi on k = 0.
    """
    if not 0 <= n <= cutoff:
        raise ValueError("manifold index out of range")
    if not 0.0 <= theta <= math.pi:
        raise ValueError("theta must lie in [0, pi]")
    amps = np.zeros(dimension(cutoff), dtype=complex)
    s, c = math.sin(theta / 2.0), math.cos(theta / 2.0)
    base = n * (n + 1) // 2
    for k in range(n + 1):
        amps[base + k] = (
            math.sqrt(math.comb(n, k)) * s ** (n - k) * c**k * np.exp(-1j * k * phi)
        )
    return PureState(cutoff, amps)


@dataclass(frozen=True)
class CoherentSpec:
    """Both modes in quadrature coherent states with amplitudes alpha_h, alpha_v.

    ``tail_tol`` bounds the total photon-number mass allowed beyond the
    truncation cutoff.
    """

    alpha_h: complex
    alpha_v: complex
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.tail_tol <= 0:
            raise ValueError("tail_tol must be positive")

    @classmethod
    def from_mean_photon(
        cls, nbar: float, theta: float = math.pi / 2, phi: float = 0.0,
        tail_tol: float = DEFAULT_TAIL_TOL,
    ) -> "CoherentSpec":
        """Parametrize by total mean photon number and Poincare angles."""
        if nbar < 0:
            raise ValueError("mean photon number must be nonnegative")
        root = math.sqrt(nbar)
        return cls(
            alpha_h=root * math.sin(theta / 2.0) * np.exp(-1j * phi / 2.0),
            alpha_v=root * math.cos(theta / 2.0) * np.exp(1j * phi / 2.0),
            tail_tol=tail_tol,
        )

    @property
    def mean_photon(self) -> float:
        return abs(self.alpha_h) ** 2 + abs(self.alpha_v) ** 2


@dataclass(frozen=True)
class TruncatedCoherent:
    """Truncated, renormalized two-mode coherent state plus its truncation record."""

    state: PureState
    tail_mass: float  # photon-number probability discarded by the truncation


def _poisson_tail_cutoff(nbar: float, tail_tol: float, max_cutoff: int) -> tuple[int, float]:
    """Smallest cutoff whose Poisson tail mass is <= tail_tol."""
    if nbar == 0.0:
        return 0, 0.0
    term = math.exp(-nbar)
    cdf = term
    for n in range(max_cutoff + 1):
        if 1.0 - cdf <= tail_tol:
            return n, max(0.0, 1.0 - cdf)
        term *= nbar / (n + 1)
        cdf += term
    raise ValueError(
        f"mean photon number {nbar} needs a cutoff beyond {max_cutoff} "
        f"to reach tail mass {tail_tol}"
    )


def two_mode_coherent(
    spec: CoherentSpec, cutoff: int | None = None, max_cutoff: int = MAX_COHERENT_CUTOFF
) -> TruncatedCoherent:
    """Product of two quadrature coherent states, truncated and renormalized.

    The cutoff is the smallest one keeping the discarded Poisson mass at or
    below ``spec.tail_tol`` unless an explicit override is given. The
    discarded mass is reported so callers can bound the truncation error.
    """
    nbar = spec.mean_photon
    if cutoff is None:
        cutoff, _ = _poisson_tail_cutoff(nbar, spec.tail_tol, max_cutoff)
    elif cutoff > max_cutoff:
        raise ValueError(f"requested cutoff {cutoff} exceeds maximum {max_cutoff}")
    amps = np.zeros(dimension(cutoff), dtype=complex)
    # amplitude on |n,k> is e^{-nbar/2} alpha_h^k alpha_v^{n-k} / sqrt(k!(n-k)!)
    log_norm = -nbar / 2.0
    for n in range(cutoff + 1):
        base = n * (n + 1) // 2
        for k in range(n + 1):
            mag = log_norm - 0.5 * (math.lgamma(k + 1) + math.lgamma(n - k + 1))
            amps[base + k] = math.exp(mag) * spec.alpha_h**k * spec.alpha_v ** (n - k)
    norm = np.linalg.norm(amps)
    tail = max(0.0, 1.0 - float(norm) ** 2)
    return TruncatedCoherent(state=PureState(cutoff, amps / norm), tail_mass=tail)


def diagonal_mixture(
    probs: Sequence[Sequence[float]],
    bases: Sequence[np.ndarray | None] | None = None,
    cutoff: int | None = None,
) -> DensityMatrix:
    """Mixture sum_{N,k} p_Nk |psi_k^N><psi_k^N| with manifold-confined states.

    ``probs[N]`` gives the weights inside manifold N; ``bases[N]``, when
    present, holds the orthonormal state amplitudes as rows of a
    (len(probs[N]), N+1) array (default: the |N,k> basis). Rows failing the
    orthonormality check (Gram deviation above 1e-10) raise.
    """
    n_manifolds = len(probs)
    if cutoff is None:
        cutoff = n_manifolds - 1
    if cutoff < n_manifolds - 1:
        raise ValueError("cutoff too small for the probability table")
    total = 0.0
    d = dimension(cutoff)
    rho = np.zeros((d, d), dtype=complex)
    for n, row in enumerate(probs):
        row = np.asarray(row, dtype=float)
        if row.size > n + 1:
            raise ValueError(f"manifold {n} takes at most {n + 1} weights")
        if row.size and row.min() < 0:
            raise ValueError("probabilities must be nonnegative")
        total += float(row.sum())
        basis = None if bases is None else bases[n]
        if basis is None:
            vecs = np.eye(n + 1, dtype=complex)[: row.size]
        else:
            vecs = np.asarray(basis, dtype=complex)
            if vecs.shape != (row.size, n + 1):
                raise ValueError(
                    f"basis for manifold {n} must have shape ({row.size}, {n + 1})"
                )
            gram = vecs @ vecs.conj().T
            if np.abs(gram - np.eye(row.size)).max() > 1e-10:
                raise ValueError(f"basis for manifold {n} is not orthonormal")
        sl = manifold_slice(n)
        rho[sl, sl] += (vecs.conj().T * row) @ vecs
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {total}, not 1")
    return DensityMatrix(cutoff, rho, check_psd=False)
