import numpy as np
import pytest

from poldeg.fock import DensityMatrix, dimension, photon_distribution, purity
from poldeg.sampling import random_block_unitary, random_density_matrix, random_unitary
from poldeg.states import fock_state
from poldeg.stokes import (
    apply_unitary,
    polarization_unitary,
    semiclassical_degree,
    stokes_matrix,
    stokes_moments,
)


def _all_ops(cutoff):
    return {name: np.asarray(stokes_matrix(name, cutoff)) for name in ("S0", "S1", "S2", "S3")}


@pytest.mark.parametrize("cutoff", [0, 1, 2, 3, 4])
def test_angular_momentum_commutators(cutoff):
    s = _all_ops(cutoff)
    for a, b, c in (("S1", "S2", "S3"), ("S2", "S3", "S1"), ("S3", "S1", "S2")):
        dev = np.abs(s[a] @ s[b] - s[b] @ s[a] - 2j * s[c]).max(initial=0.0)
        assert dev < 1e-12
    for name in ("S1", "S2", "S3"):
        assert np.abs(s[name] @ s["S0"] - s["S0"] @ s[name]).max(initial=0.0) < 1e-12


def test_stokes_matrices_are_hermitian_and_block_diagonal():
    s = _all_ops(3)
    for m in s.values():
        assert np.abs(m - m.conj().T).max() < 1e-15
        # no coupling between manifolds 0..3
        assert np.abs(m[0, 1:]).max() == 0.0
        assert np.abs(m[1:3, 3:]).max() == 0.0


def test_s3_diagonal_on_manifold_one():
    s3 = np.asarray(stokes_matrix("S3", 1))
    np.testing.assert_allclose(s3[1:, 1:], np.diag([-1.0, 1.0]), atol=1e-15)


def test_s0_diagonal():
    s0 = np.asarray(stokes_matrix("S0", 2))
    np.testing.assert_allclose(np.diag(s0).real, [0, 1, 1, 2, 2, 2], atol=1e-15)


def test_moments_vacuum():
    m = stokes_moments(DensityMatrix.from_pure(fock_state(0, 0, 0)))
    assert m.s0 == pytest.approx(0.0, abs=1e-14)
    assert np.linalg.norm(m.svec) == pytest.approx(0.0, abs=1e-14)
    assert m.variance_sum == pytest.approx(0.0, abs=1e-14)


def test_moments_single_photon_saturates_uncertainty():
    m = stokes_moments(DensityMatrix.from_pure(fock_state(1, 1, 1)))
    np.testing.assert_allclose(m.svec, (0.0, 0.0, 1.0), atol=1e-14)
    assert m.variance_sum == pytest.approx(2.0 * m.s0, abs=1e-12)


def test_equal_photon_pairs_have_zero_stokes_vector():
    for n in (1, 2, 3):
        m = stokes_moments(DensityMatrix.from_pure(fock_state(2 * n, n, 2 * n)))
        assert np.linalg.norm(m.svec) < 1e-12


def test_uncertainty_relation_on_random_states():
    rng = np.random.default_rng(23)
    for _ in range(200):
        cutoff = int(rng.integers(0, 5))
        m = stokes_moments(random_density_matrix(cutoff, rng))
        assert m.variance_sum >= 2.0 * m.s0 - 1e-9
        assert np.linalg.norm(m.svec) <= m.s0 + 1e-9


def test_semiclassical_examples():
    assert semiclassical_degree(DensityMatrix.from_pure(fock_state(1, 1, 1))) == pytest.approx(1.0)
    assert semiclassical_degree(DensityMatrix.from_pure(fock_state(2, 1, 2))) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError, match="undefined for vacuum"):
        semiclassical_degree(DensityMatrix.from_pure(fock_state(0, 0, 0)))


def test_polarization_unitary_identity_and_unitarity():
    u = polarization_unitary(np.array([0.0, 0.0, 1.0]), 0.0, 0.0, 2)
    np.testing.assert_allclose(u, np.eye(dimension(2)), atol=1e-14)

    rng = np.random.default_rng(2)
    for _ in range(10):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        u = polarization_unitary(axis, rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi), 3)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(dimension(3)), atol=1e-10)


def test_polarization_unitary_rejects_non_unit_axis():
    with pytest.raises(ValueError, match="unit"):
        polarization_unitary(np.array([1.0, 1.0, 0.0]), 0.3, 0.0, 1)


def test_s3_axis_rotation_only_phases_eigenstates():
    u = polarization_unitary(np.array([0.0, 0.0, 1.0]), np.pi, 0.0, 1)
    psi = fock_state(1, 1, 1).amplitudes
    out = u @ psi
    overlap = np.vdot(psi, out)
    assert abs(abs(overlap) - 1.0) < 1e-12  # same state up to a phase


def test_apply_unitary_preserves_structure():
    rng = np.random.default_rng(9)
    rho = random_density_matrix(3, rng)
    np.testing.assert_allclose(
        apply_unitary(rho, np.eye(rho.dim)).entries, rho.entries, atol=1e-14
    )
    u = random_unitary(rho.dim, rng)
    assert purity(apply_unitary(rho, u)) == pytest.approx(purity(rho), abs=1e-12)
    ub = random_block_unitary(3, rng)
    np.testing.assert_allclose(
        photon_distribution(apply_unitary(rho, ub)).probs,
        photon_distribution(rho).probs,
        atol=1e-12,
    )
    with pytest.raises(ValueError, match="dimension"):
        apply_unitary(rho, np.eye(3))


def test_semiclassical_invariant_under_polarization_rotations():
    rng = np.random.default_rng(31)
    rho = random_density_matrix(2, rng)
    base = semiclassical_degree(rho)
    for _ in range(5):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        u = polarization_unitary(axis, rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi), 2)
        assert semiclassical_degree(apply_unitary(rho, u)) == pytest.approx(base, abs=1e-10)
