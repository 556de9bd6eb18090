"""Closed-form analytics for rank-2 states straddling two excitation manifolds.

These states are parametrized by the weight p on a pure state in manifold N1,
the weight 1-p on an orthogonal pure state in manifold N2, and a coherence q
between them (|q|^2 <= p(1-p)). For such states the fidelity to an
unpolarized state depends only on the two weights (lambda1, lambda2) of the
occupied manifolds, and the maximizer is available in closed form. This is
the smallest family on which the Hilbert-Schmidt and Bures degrees order
states differently, which is what the sweep at the bottom maps out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock import (
    DEFAULT_TOL,
    DensityMatrix,
    PureState,
    Tolerances,
    basis_index,
    BasisLabel,
    dimension,
    embed_pure,
    manifold_slice,
)

__all__ = [
    "TwoManifoldState",
    "embed",
    "chi_eigenvalues",
    "fidelity_closed",
    "fidelity_stationarity",
    "optimal_spectrum",
    "sup_fidelity",
    "degree_pair",
    "figure1_sweep",
    "SweepRow",
    "FIGURE1_COLUMNS",
]

_PURE_BAND = 1e-14  # p(1-p) - |q|^2 below this counts as a pure superposition


def _default_vector(n: int, cutoff: int) -> PureState:
    amps = np.zeros(dimension(cutoff), dtype=complex)
    amps[basis_index(BasisLabel(n, 0), cutoff)] = 1.0
    return PureState(cutoff, amps)


@dataclass(frozen=True, eq=False)
class TwoManifoldState:
    """Rank <= 2 state across manifolds n1 != n2.

    ``psi1``/``psi2`` default to the basis vectors |n,0>; any pair of unit
    vectors confined to the respective manifolds works, and all derived
    quantities depend only on (n1, n2, p, |q|).
    """

    n1: int
    n2: int
    p: float
    q: complex = 0.0
    psi1: PureState | None = None
    psi2: PureState | None = None
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        if self.n1 == self.n2 or self.n1 < 0 or self.n2 < 0:
            raise ValueError("manifold indices must be distinct and nonnegative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if abs(self.q) ** 2 > self.p * (1.0 - self.p) + 1e-12:
            raise ValueError("|q|^2 exceeds p(1-p); the 2x2 block would not be positive")
        base = max(self.n1, self.n2)
        if self.psi1 is None:
            object.__setattr__(self, "psi1", _default_vector(self.n1, base))
        if self.psi2 is None:
            object.__setattr__(self, "psi2", _default_vector(self.n2, base))
        for psi, n in ((self.psi1, self.n1), (self.psi2, self.n2)):
            w = psi.manifold_weights()
            if abs(w[n] - 1.0) > 1e-10:
                raise ValueError(f"support leaks outside manifold {n}")

    @property
    def coherence_gap(self) -> float:
        """p(1-p) - |q|^2, clamped at 0; zero means a pure superposition."""
        return max(0.0, self.p * (1.0 - self.p) - abs(self.q) ** 2)

    @property
    def is_pure(self) -> bool:
        return self.p * (1.0 - self.p) - abs(self.q) ** 2 <= _PURE_BAND

    def purity(self) -> float:
        return self.p**2 + (1.0 - self.p) ** 2 + 2.0 * abs(self.q) ** 2


def embed(state: TwoManifoldState, cutoff: int) -> DensityMatrix:
    """Realize the state as a full density matrix at the given cutoff."""
    if cutoff < max(state.n1, state.n2):
        raise ValueError("cutoff too small for the chosen manifolds")
    v1 = embed_pure(state.psi1, cutoff).amplitudes
    v2 = embed_pure(state.psi2, cutoff).amplitudes
    rho = (
        state.p * np.outer(v1, v1.conj())
        + (1.0 - state.p) * np.outer(v2, v2.conj())
        + state.q * np.outer(v1, v2.conj())
        + np.conj(state.q) * np.outer(v2, v1.conj())
    )
    return DensityMatrix(cutoff, rho, tol=state.tol, check_psd=False)


def chi_eigenvalues(
    state: TwoManifoldState, lambda1: float, lambda2: float
) -> tuple[float, float]:
    """Eigenvalues of the 2x2 matrix sqrt(sigma) rho sqrt(sigma) on the occupied plane.

    sigma carries weight lambda1 on manifold n1 and lambda2 on n2.
    """
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("manifold weights must be nonnegative")
    a = lambda1 * state.p
    b = lambda2 * (1.0 - state.p)
    disc = math.sqrt((a - b) ** 2 + 4.0 * lambda1 * lambda2 * abs(state.q) ** 2)
    return ((a + b + disc) / 2.0, max(0.0, (a + b - disc) / 2.0))


def fidelity_closed(state: TwoManifoldState, lambda1: float, lambda2: float) -> float:
    """Fidelity to the unpolarized state with weights (lambda1, lambda2).

    Equals lambda1 p + lambda2 (1-p) + 2 sqrt(lambda1 lambda2 [p(1-p) - |q|^2]);
    strictly decreasing in |q|^2 at fixed weights.
    """
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("manifold weights must be nonnegative")
    gap = state.coherence_gap
    return (
        lambda1 * state.p
        + lambda2 * (1.0 - state.p)
        + 2.0 * math.sqrt(lambda1 * lambda2 * gap)
    )


def _lambda2_from_constraint(state: TwoManifoldState, lambda1: float) -> float:
    return (1.0 - (state.n1 + 1) * lambda1) / (state.n2 + 1)


def fidelity_stationarity(state: TwoManifoldState, lambda1: float) -> float:
    """Derivative of the fidelity along the trace-constraint line at lambda1.

    Zero at an interior maximizer; used as a convergence certificate.
    """
    a, b = state.n1 + 1, state.n2 + 1
    lam2 = _lambda2_from_constraint(state, lambda1)
    gap = state.coherence_gap
    if lambda1 <= 0 or lam2 <= 0:
        raise ValueError("stationarity only applies to interior points")
    return (
        state.p
        - a * (1.0 - state.p) / b
        + (1.0 - 2.0 * a * lambda1) * math.sqrt(gap / (lambda1 * (1.0 - a * lambda1) * b))
    )


def optimal_spectrum(state: TwoManifoldState) -> tuple[float, float]:
    """Weights (lambda1, lambda2) of the fidelity-maximizing unpolarized state.

    Pure superpositions have a piecewise-constant solution that jumps between
    the two single-manifold vertices at p = (1+n1)/(2+n1+n2) (the boundary is
    resolved to lambda1 = 0; any weight in [0, 1/(1+n1)] gives the same
    fidelity there). Mixed states have a unique interior stationary point.
    """
    a, b = state.n1 + 1, state.n2 + 1
    if state.is_pure:
        lambda1 = 1.0 / a if state.p > a / (a + b) else 0.0
    else:
        gm = a * (1.0 - state.p) - b * state.p
        h = 1.0 + state.n1 * (1.0 - state.p) + state.n2 * state.p
        surd = math.sqrt(h * h - 4.0 * a * b * abs(state.q) ** 2)
        lambda1 = (1.0 - gm / surd) / (2.0 * a)
    lambda1 = min(max(lambda1, 0.0), 1.0 / a)
    return lambda1, _lambda2_from_constraint(state, lambda1)


def sup_fidelity(state: TwoManifoldState) -> float:
    return fidelity_closed(state, *optimal_spectrum(state))


def degree_pair(state: TwoManifoldState) -> tuple[float, float]:
    """(Hilbert-Schmidt degree, Bures degree) of the state."""
    a, b = state.n1 + 1, state.n2 + 1
    p_hs = state.purity() - (state.p**2 / a + (1.0 - state.p) ** 2 / b)
    p_bures = 1.0 - math.sqrt(sup_fidelity(state))
    return p_hs, p_bures


FIGURE1_COLUMNS = ("p", "q_squared", "case", "P_HS", "P_B", "lambda1", "lambda2")


@dataclass(frozen=True)
class SweepRow:
    p: float
    q_squared: float
    case: str  # "pure" | "diagonal" (markers use custom labels)
    p_hs: float
    p_bures: float
    lambda1: float
    lambda2: float


def make_row(n1: int, n2: int, p: float, q_squared: float, case: str) -> SweepRow:
    state = TwoManifoldState(n1, n2, p, math.sqrt(q_squared))
    lam1, lam2 = optimal_spectrum(state)
    p_hs, p_b = degree_pair(state)
    return SweepRow(p, q_squared, case, p_hs, p_b, lam1, lam2)


def figure1_sweep(n1: int, n2: int, resolution: int) -> list[SweepRow]:
    """Degrees along p in [0, 1] for the two coherence envelopes.

    For every p two rows are produced: the pure superposition
    (|q|^2 = p(1-p), the fidelity minimum) and the diagonal mixture (q = 0,
    the fidelity maximum). Rows come back sorted by (p, case).
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    rows = []
    for p in np.linspace(0.0, 1.0, resolution):
        p = float(p)
        for case in ("diagonal", "pure"):
            q2 = p * (1.0 - p) if case == "pure" else 0.0
            rows.append(make_row(n1, n2, p, q2, case))
    rows.sort(key=lambda r: (r.p, r.case))
    return rows
