"""Truncated two-mode Fock space: basis bookkeeping, pure states, density matrices.

The two modes are labelled H and V. States with exactly N photons in total form
the (N+1)-dimensional excitation manifold spanned by |N,k> = |k>_H |N-k>_V,
k = 0..N. Everything in this package lives on the space truncated at a total
photon number ``cutoff``; the flat basis ordering is manifold-major (all of
manifold N before manifold N+1) with k ascending inside a manifold, so the
dimension is D = (cutoff+1)(cutoff+2)/2.

Zero-padding a state into a larger cutoff changes none of the derived
quantities (photon distribution, purity, polarization degrees), which is what
makes the truncation safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "BasisLabel",
    "PureState",
    "DensityMatrix",
    "PhotonNumberDistribution",
    "dimension",
    "basis_index",
    "basis_label",
    "manifold_slice",
    "iter_labels",
    "photon_distribution",
    "purity",
    "block",
    "embed_pure",
    "embed_density",
]


@dataclass(frozen=True)
class Tolerances:
    """Validation tolerances for state construction.

    The defaults are deliberate and shared by the whole package; pass a
    modified instance to a constructor to override them for one value.
    """

    norm: float = 1e-12        # |  ||psi|| - 1  | for pure states
    hermitian: float = 1e-12   # entrywise |rho - rho^dag|
    trace: float = 1e-10       # |Tr(rho) - 1|
    psd: float = 1e-10         # allowed eigenvalue undershoot below 0


DEFAULT_TOL = Tolerances()


def dimension(cutoff: int) -> int:
    """Dimension of the truncated space, (cutoff+1)(cutoff+2)/2."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    return (cutoff + 1) * (cutoff + 2) // 2


@dataclass(frozen=True, order=True)
class BasisLabel:
    """Index (n, k) of |n,k> = |k>_H |n-k>_V inside excitation manifold n."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.k <= self.n:
            raise ValueError(f"invalid basis label (n={self.n}, k={self.k})")


def basis_index(label: BasisLabel, cutoff: int) -> int:
    """Flat index of ``label`` in the manifold-major ordering."""
    if label.n > cutoff:
        raise ValueError("basis label exceeds cutoff")
    return label.n * (label.n + 1) // 2 + label.k


def basis_label(index: int, cutoff: int) -> BasisLabel:
    """Inverse of :func:`basis_index`."""
    if not 0 <= index < dimension(cutoff):
        raise ValueError("basis index out of range")
    # manifold n is the largest with n(n+1)/2 <= index
    n = int((np.sqrt(8 * index + 1) - 1) // 2)
    while n * (n + 1) // 2 > index:
        n -= 1
    while (n + 1) * (n + 2) // 2 <= index:
        n += 1
    return BasisLabel(n, index - n * (n + 1) // 2)


def manifold_slice(n: int) -> slice:
    """Slice of flat indices covering excitation manifold n."""
    start = n * (n + 1) // 2
    return slice(start, start + n + 1)


def iter_labels(cutoff: int) -> Iterator[BasisLabel]:
    for n in range(cutoff + 1):
        for k in range(n + 1):
            yield BasisLabel(n, k)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector on the truncated space, indexed by flat basis index."""

    cutoff: int
    amplitudes: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (dimension(self.cutoff),):
            raise ValueError(
                f"amplitude vector has length {amps.shape}, "
                f"expected {dimension(self.cutoff)} for cutoff {self.cutoff}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > self.tol.norm:
            raise ValueError(f"state norm {norm} deviates from 1 beyond tolerance")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    def manifold_weights(self) -> np.ndarray:
        """Total photon number distribution p_N = sum_k |amp(N,k)|^2."""
        mags = np.abs(self.amplitudes) ** 2
        return np.array(
            [mags[manifold_slice(n)].sum() for n in range(self.cutoff + 1)]
        )

    def density(self) -> "DensityMatrix":
        return DensityMatrix.from_pure(self)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on the truncated space.

    ``check_psd=False`` skips the eigenvalue check for matrices that are
    positive by construction (pure projectors, unitary conjugates of valid
    states); Hermiticity and trace are always verified.
    """

    cutoff: int
    entries: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)
    check_psd: bool = field(default=True, repr=False)

    def __post_init__(self):
        d = dimension(self.cutoff)
        a = np.ascontiguousarray(self.entries, dtype=complex)
        if a.shape != (d, d):
            raise ValueError(f"entries have shape {a.shape}, expected ({d}, {d})")
        dev = np.abs(a - a.conj().T).max()
        if dev > self.tol.hermitian:
            raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
        a = (a + a.conj().T) / 2.0
        tr = a.trace().real
        if abs(tr - 1.0) > self.tol.trace:
            raise ValueError(f"trace {tr} deviates from 1 beyond tolerance")
        if self.check_psd:
            lo = np.linalg.eigvalsh(a)[0]
            if lo < -self.tol.psd:
                raise ValueError(f"matrix is not positive semidefinite (min eig {lo:.3e})")
        object.__setattr__(self, "entries", _readonly(a))

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        # |psi><psi| is positive by construction
        return cls(psi.cutoff, np.outer(psi.amplitudes, psi.amplitudes.conj()),
                   tol=psi.tol, check_psd=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class PhotonNumberDistribution:
    """Probabilities p_N of the total photon number, N = 0..cutoff."""

    probs: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d vector")
        if p.min() < -self.tol.trace:
            raise ValueError(f"negative probability {p.min():.3e}")
        if abs(p.sum() - 1.0) > self.tol.trace:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        object.__setattr__(self, "probs", _readonly(np.maximum(p, 0.0)))

    @property
    def cutoff(self) -> int:
        return self.probs.size - 1


def photon_distribution(rho: DensityMatrix) -> PhotonNumberDistribution:
    """p_N = sum_k <N,k|rho|N,k>."""
    diag = np.real(np.diag(rho.entries))
    probs = [diag[manifold_slice(n)].sum() for n in range(rho.cutoff + 1)]
    return PhotonNumberDistribution(np.array(probs), tol=rho.tol)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2); equals the squared Frobenius norm for Hermitian rho."""
    return float(np.vdot(rho.entries, rho.entries).real)


def block(rho: DensityMatrix, n: int, nprime: int) -> np.ndarray:
    """The (n+1) x (nprime+1) submatrix <n,k|rho|nprime,k'>."""
    if not (0 <= n <= rho.cutoff and 0 <= nprime <= rho.cutoff):
        raise ValueError("manifold index out of range")
    return rho.entries[manifold_slice(n), manifold_slice(nprime)].copy()


def embed_pure(psi: PureState, cutoff: int) -> PureState:
    """Zero-pad ``psi`` into a larger cutoff."""
    if cutoff < psi.cutoff:
        raise ValueError("target cutoff smaller than source cutoff")
    amps = np.zeros(dimension(cutoff), dtype=complex)
    amps[: psi.amplitudes.size] = psi.amplitudes
    return PureState(cutoff, amps, tol=psi.tol)


def embed_density(rho: DensityMatrix, cutoff: int) -> DensityMatrix:
    """Zero-pad ``rho`` into a larger cutoff."""
    if cutoff < rho.cutoff:
        raise ValueError("target cutoff smaller than source cutoff")
    d = dimension(cutoff)
    out = np.zeros((d, d), dtype=complex)
    s = rho.entries.shape[0]
    out[:s, :s] = rho.entries
    return DensityMatrix(cutoff, out, tol=rho.tol, check_psd=False)
