"""Distance-based degrees of polarization for two-mode quantum optical fields.

The package measures how far a state on the truncated two-mode Fock space
sits from the set of SU(2)-invariant (unpolarized) states, using the
Hilbert-Schmidt and Bures distances, next to the semiclassical Stokes-vector
degree and the all-or-nothing membership indicator.
"""

from .degrees import (
    BuresOptimizationError,
    DegreeReport,
    OptimizerSettings,
    degree_bures_diagonal,
    degree_bures_general,
    degree_bures_pure,
    degree_discrete,
    degree_hs,
    diagonal_bures_bounds,
    sqrt_fidelity_to_unpolarized,
)
from .fock import (
    BasisLabel,
    DensityMatrix,
    PhotonNumberDistribution,
    PureState,
    Tolerances,
    basis_index,
    basis_label,
    block,
    dimension,
    embed_density,
    embed_pure,
    photon_distribution,
    purity,
)
from .metrics import (
    bures_distance,
    discrete_distance,
    fidelity,
    hs_distance,
    relative_entropy,
    sqrt_fidelity,
)
from .state_spec import LoadedState, StateSpecError, load_state, parse_state
from .states import (
    CoherentSpec,
    TruncatedCoherent,
    diagonal_mixture,
    fock_state,
    su2_coherent,
    two_mode_coherent,
)
from .stokes import (
    StokesMoments,
    apply_unitary,
    polarization_unitary,
    semiclassical_degree,
    stokes_matrix,
    stokes_moments,
)
from .two_manifold import (
    TwoManifoldState,
    chi_eigenvalues,
    degree_pair,
    embed,
    fidelity_closed,
    figure1_sweep,
    optimal_spectrum,
    sup_fidelity,
)
from .unpolarized import (
    UnpolarizedSpectrum,
    hs_closest,
    is_unpolarized,
    spectrum_purity,
    to_density,
)

__version__ = "0.1.0"
