import math

import numpy as np
import pytest

from poldeg.degrees import (
    BuresOptimizationError,
    OptimizerSettings,
    degree_bures_diagonal,
    degree_bures_general,
    degree_bures_pure,
    degree_discrete,
    degree_hs,
    diagonal_bures_bounds,
    project_weighted_simplex,
    sqrt_fidelity_to_unpolarized,
)
from poldeg.fock import DensityMatrix, purity
from poldeg.metrics import hs_distance
from poldeg.sampling import (
    random_block_unitary,
    random_density_matrix,
    random_pure_state,
    random_unpolarized_spectrum,
)
from poldeg.states import diagonal_mixture, fock_state
from poldeg.stokes import apply_unitary
from poldeg.two_manifold import TwoManifoldState, embed, sup_fidelity
from poldeg.unpolarized import hs_closest, is_unpolarized, spectrum_purity, to_density


def _random_diagonal_probs(cutoff, rng):
    raw = [rng.uniform(0.0, 1.0, size=n + 1) for n in range(cutoff + 1)]
    total = sum(r.sum() for r in raw)
    return [list(r / total) for r in raw]


# ---------------------------------------------------------------------------
# Hilbert-Schmidt degree
# ---------------------------------------------------------------------------


def test_degree_hs_pure_states():
    rng = np.random.default_rng(0)
    for n in range(0, 8):
        rho = DensityMatrix.from_pure(random_pure_state(n, rng, manifold=n))
        assert degree_hs(rho).value == pytest.approx(n / (n + 1), abs=1e-12)


def test_degree_hs_vanishes_on_unpolarized():
    rng = np.random.default_rng(1)
    for _ in range(10):
        rho = to_density(random_unpolarized_spectrum(3, rng))
        assert degree_hs(rho).value < 1e-12


def test_degree_hs_equals_distance_to_closest():
    rng = np.random.default_rng(2)
    for _ in range(20):
        rho = random_density_matrix(3, rng)
        report = degree_hs(rho)
        sigma = to_density(hs_closest(rho))
        assert report.value == pytest.approx(hs_distance(rho, sigma), abs=1e-12)
        # recast form: purity difference against the optimal spectrum
        assert report.value == pytest.approx(
            purity(rho) - spectrum_purity(report.optimal_spectrum), abs=1e-12
        )


# ---------------------------------------------------------------------------
# Bures closed forms
# ---------------------------------------------------------------------------


def _rank1_sup_oracle(psi):
    """Brute maximization of <psi|sigma(lambda)|psi> over vertex spectra."""
    p = psi.manifold_weights()
    return max(p[n] / (n + 1) for n in range(p.size))


def test_degree_bures_pure_examples():
    psi3 = fock_state(3, 1, 3)
    assert degree_bures_pure(psi3).value == pytest.approx(0.5, abs=1e-15)

    vac = fock_state(0, 0, 0)
    assert degree_bures_pure(vac).value == 0.0

    rng = np.random.default_rng(3)
    for _ in range(20):
        psi = random_pure_state(3, rng)
        expect = 1.0 - math.sqrt(_rank1_sup_oracle(psi))
        assert degree_bures_pure(psi).value == pytest.approx(expect, abs=1e-12)


def test_degree_bures_pure_two_manifold_value():
    # p = 0.9 on manifold 1, 0.1 on manifold 2, pure superposition
    state = TwoManifoldState(1, 2, p=0.9, q=math.sqrt(0.09))
    amps = (
        math.sqrt(0.9) * state.psi1.amplitudes + math.sqrt(0.1) * state.psi2.amplitudes
    )
    from poldeg.fock import PureState

    psi = PureState(2, amps)
    report = degree_bures_pure(psi)
    assert report.value == pytest.approx(1.0 - math.sqrt(0.45), abs=1e-12)
    np.testing.assert_allclose(report.optimal_spectrum.lambdas, [0.0, 0.5, 0.0], atol=1e-14)


def test_degree_bures_pure_tie_breaks_to_smallest_manifold():
    from poldeg.fock import PureState, basis_index, BasisLabel, dimension

    # equal scores p_N/(N+1) on manifolds 0 and 1
    amps = np.zeros(dimension(1), dtype=complex)
    amps[0] = math.sqrt(1.0 / 3.0)
    amps[basis_index(BasisLabel(1, 0), 1)] = math.sqrt(2.0 / 3.0)
    report = degree_bures_pure(PureState(1, amps))
    np.testing.assert_allclose(report.optimal_spectrum.lambdas, [1.0, 0.0], atol=1e-14)


def test_degree_bures_diagonal_examples():
    for n in (1, 2, 5):
        probs = [[0.0]] * n + [[1.0]]
        assert degree_bures_diagonal(probs).value == pytest.approx(
            1.0 - 1.0 / math.sqrt(n + 1), abs=1e-14
        )

    uniform = [[0.0], [0.0, 0.0], [1 / 3, 1 / 3, 1 / 3]]
    assert degree_bures_diagonal(uniform).value == pytest.approx(0.0, abs=1e-12)

    two_level = [[0.0], [4.0 / 7.0], [3.0 / 7.0]]
    assert degree_bures_diagonal(two_level).value == pytest.approx(
        1.0 - math.sqrt(3.0 / 7.0), abs=1e-14
    )


def test_degree_bures_diagonal_optimal_spectrum_formula():
    rng = np.random.default_rng(4)
    probs = _random_diagonal_probs(3, rng)
    report = degree_bures_diagonal(probs)
    s = np.array([np.sqrt(np.asarray(row)).sum() for row in probs])
    mult = np.arange(1, 5, dtype=float)
    lam = s**2 / (mult**2 * float((s**2 / mult).sum()))
    np.testing.assert_allclose(report.optimal_spectrum.lambdas, lam, atol=1e-14)


def test_degree_bures_diagonal_rejects_unnormalized():
    with pytest.raises(ValueError, match="sum to"):
        degree_bures_diagonal([[0.5], [0.4]])
    with pytest.raises(ValueError, match="nonnegative"):
        degree_bures_diagonal([[1.5], [-0.5]])


def test_diagonal_bures_bounds():
    pure = [[0.0], [0.0, 0.0], [1.0]]
    lower, upper = diagonal_bures_bounds(pure)
    value = degree_bures_diagonal(pure).value
    assert lower <= value <= upper + 1e-14
    assert upper == pytest.approx(1.0 - math.sqrt(1.0 / 3.0), abs=1e-14)

    uniform = [[0.0], [0.5, 0.5]]
    lower, upper = diagonal_bures_bounds(uniform)
    assert degree_bures_diagonal(uniform).value == pytest.approx(lower, abs=1e-12)

    two_level = [[0.0], [4.0 / 7.0], [3.0 / 7.0]]
    _, upper = diagonal_bures_bounds(two_level)
    assert upper == pytest.approx(1.0 - math.sqrt(3.0 / 7.0), abs=1e-14)
    assert degree_bures_diagonal(two_level).value == pytest.approx(upper, abs=1e-14)

    rng = np.random.default_rng(5)
    for _ in range(20):
        probs = _random_diagonal_probs(3, rng)
        lower, upper = diagonal_bures_bounds(probs)
        assert lower - 1e-12 <= degree_bures_diagonal(probs).value <= upper + 1e-12


# ---------------------------------------------------------------------------
# general optimizer
# ---------------------------------------------------------------------------


def test_projection_onto_weighted_simplex():
    rng = np.random.default_rng(6)
    w = np.arange(1.0, 6.0)
    for _ in range(50):
        v = rng.standard_normal(5)
        x = project_weighted_simplex(v, w)
        assert x.min() >= 0.0
        assert abs(w @ x - 1.0) < 1e-12
        # projection optimality: no feasible point is closer than x
        for _ in range(20):
            nu = rng.dirichlet(np.ones(5))
            y = nu / w
            assert np.linalg.norm(v - x) <= np.linalg.norm(v - y) + 1e-10


def test_general_matches_rank1_on_pure_states():
    rng = np.random.default_rng(7)
    for _ in range(20):
        psi = random_pure_state(3, rng)
        closed = degree_bures_pure(psi).value
        numeric = degree_bures_general(DensityMatrix.from_pure(psi)).value
        assert numeric == pytest.approx(closed, abs=1e-7)


def test_general_matches_diagonal_closed_form():
    rng = np.random.default_rng(8)
    for _ in range(20):
        cutoff = int(rng.integers(1, 5))
        probs = _random_diagonal_probs(cutoff, rng)
        closed = degree_bures_diagonal(probs).value
        numeric = degree_bures_general(diagonal_mixture(probs, cutoff=cutoff)).value
        assert numeric == pytest.approx(closed, abs=1e-7)


def test_general_matches_two_manifold_chain():
    state = TwoManifoldState(1, 2, p=0.3, q=math.sqrt(0.1))
    report = degree_bures_general(embed(state, 2))
    assert report.value == pytest.approx(1.0 - math.sqrt(sup_fidelity(state)), abs=1e-7)
    # the closed chain gives sup F = 1/3 for these parameters
    assert sup_fidelity(state) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_general_reports_feasible_spectrum_and_certificate():
    rng = np.random.default_rng(9)
    for _ in range(10):
        rho = random_density_matrix(3, rng)
        report = degree_bures_general(rho)
        assert report.residual <= 1e-9
        lam = report.optimal_spectrum.lambdas
        achieved = sqrt_fidelity_to_unpolarized(rho, lam)
        for _ in range(1000):
            other = random_unpolarized_spectrum(3, rng).lambdas
            assert achieved >= sqrt_fidelity_to_unpolarized(rho, other) - 1e-12


def test_general_optimizer_error_carries_best_iterate():
    rng = np.random.default_rng(10)
    probs = _random_diagonal_probs(3, rng)
    rho = diagonal_mixture(probs, cutoff=3)
    with pytest.raises(BuresOptimizationError) as err:
        degree_bures_general(rho, OptimizerSettings(max_iter=1, kkt_tol=1e-16))
    assert 0.0 <= err.value.best_value <= 1.0
    assert err.value.residual > 1e-16


def test_alternative_definition_flag():
    psi = fock_state(2, 1, 2)
    standard = degree_bures_pure(psi).value
    alt = degree_bures_pure(psi, alternative=True).value
    assert alt == pytest.approx(1.0 - (1.0 - standard) ** 2, abs=1e-14)

    rho = DensityMatrix.from_pure(psi)
    alt_general = degree_bures_general(
        rho, OptimizerSettings(alternative_definition=True)
    ).value
    assert alt_general == pytest.approx(alt, abs=1e-7)


def test_finite_difference_gradient_mode_agrees():
    rng = np.random.default_rng(11)
    rho = random_density_matrix(2, rng)
    default = degree_bures_general(rho).value
    fd = degree_bures_general(
        rho, OptimizerSettings(gradient_method="finite_difference", kkt_tol=1e-7)
    ).value
    assert fd == pytest.approx(default, abs=1e-6)


# ---------------------------------------------------------------------------
# discrete degree and the distinguishing examples
# ---------------------------------------------------------------------------


def test_degree_discrete():
    rng = np.random.default_rng(12)
    assert degree_discrete(to_density(random_unpolarized_spectrum(2, rng))) == 0
    assert degree_discrete(DensityMatrix.from_pure(fock_state(1, 1, 1))) == 1
    # one photon in each mode: semiclassically dark but polarized here
    rho = DensityMatrix.from_pure(fock_state(2, 1, 2))
    assert degree_discrete(rho) == 1


# ---------------------------------------------------------------------------
# shared degree properties
# ---------------------------------------------------------------------------


def test_c1_zero_degree_exactly_on_unpolarized_states():
    rng = np.random.default_rng(13)
    suite = []
    for _ in range(5):
        suite.append((to_density(random_unpolarized_spectrum(2, rng)), True))
        suite.append((random_density_matrix(2, rng), False))
    sigma = to_density(random_unpolarized_spectrum(2, rng))
    bumped = np.array(sigma.entries)
    bumped[0, 1] += 1e-2
    bumped[1, 0] += 1e-2
    suite.append((DensityMatrix(2, bumped), False))

    for rho, unpol in suite:
        assert is_unpolarized(rho, 1e-9) == unpol
        assert (degree_hs(rho).value < 1e-9) == unpol
        assert (degree_bures_general(rho).value < 1e-6) == unpol


def test_c2_invariance_under_energy_preserving_unitaries():
    rng = np.random.default_rng(14)
    for _ in range(20):
        rho = random_density_matrix(3, rng)
        hs0 = degree_hs(rho).value
        b0 = degree_bures_general(rho).value
        u = random_block_unitary(3, rng)
        rot = apply_unitary(rho, u)
        assert abs(degree_hs(rot).value - hs0) < 1e-8
        assert abs(degree_bures_general(rot).value - b0) < 1e-8


def test_degrees_grow_toward_one_with_intensity():
    hs_prev, b_prev = -1.0, -1.0
    for n in (1, 3, 9, 20):
        psi = fock_state(n, 0, n)
        hs = degree_hs(DensityMatrix.from_pure(psi)).value
        b = degree_bures_pure(psi).value
        assert 0.0 <= hs < 1.0 and 0.0 <= b < 1.0
        assert hs > hs_prev and b > b_prev
        hs_prev, b_prev = hs, b
