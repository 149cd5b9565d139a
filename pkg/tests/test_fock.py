import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import random_density
from noonsim.errors import DomainError, InvariantError
from noonsim.fock import (
    BASIS,
    DIM,
    assert_density_matrix,
    basis_index,
    expectation,
    fock_density,
    index_occupation,
    mean_photon_number,
    number_operator,
    projector,
    pure_density,
    purity,
    sector_populations,
)


def test_basis_order_and_bijection():
    assert basis_index(0, 0) == 0
    assert basis_index(1, 0) == 1
    assert basis_index(0, 2) == 5
    for i, (na, nb) in enumerate(BASIS):
        assert basis_index(na, nb) == i
        assert index_occupation(i) == (na, nb)


@pytest.mark.parametrize("occ", [(3, 0), (1, 2), (2, 1), (-1, 0), (0, -2)])
def test_basis_index_rejects_out_of_truncation(occ):
    with pytest.raises(DomainError):
        basis_index(*occ)


def test_basis_index_rejects_non_integers():
    with pytest.raises(DomainError):
        basis_index(0.5, 0.5)


def test_index_occupation_rejects_bad_index():
    for index in (-1, 6, 100):
        with pytest.raises(DomainError):
            index_occupation(index)


def test_projector_properties():
    total = np.zeros((DIM, DIM), dtype=complex)
    for i in range(DIM):
        p = projector(i)
        assert np.allclose(p @ p, p)
        assert np.allclose(p, p.conj().T)
        assert np.linalg.matrix_rank(p) == 1
        total += p
    assert np.allclose(total, np.eye(DIM))
    with pytest.raises(DomainError):
        projector(6)


def test_expectation_on_basis_states():
    rho = fock_density(1, 1)
    assert expectation(rho, projector(3)) == pytest.approx(1.0)
    assert expectation(rho, projector(0)) == pytest.approx(0.0)
    mixed = 0.5 * fock_density(2, 0) + 0.5 * fock_density(0, 2)
    assert expectation(mixed, projector(4)) == pytest.approx(0.5)


def test_expectation_rejects_non_hermitian():
    op = np.zeros((DIM, DIM), dtype=complex)
    op[0, 1] = 1.0
    with pytest.raises(DomainError):
        expectation(fock_density(0, 0), op)


@given(st.integers(0, 10**6))
def test_expectation_of_identity_is_trace(seed):
    rho = random_density(np.random.default_rng(seed))
    assert expectation(rho, np.eye(DIM)) == pytest.approx(float(np.trace(rho).real), abs=1e-12)


def test_number_operator_values():
    n_op = number_operator()
    assert expectation(fock_density(1, 1), n_op) == pytest.approx(2.0)
    # equal one-photon split, as after complete two-photon scattering
    singles = pure_density(np.array([0, 1, -1, 0, 0, 0]) / np.sqrt(2))
    assert expectation(singles, n_op) == pytest.approx(1.0)
    assert mean_photon_number(singles) == pytest.approx(1.0)


def test_sector_populations_and_purity():
    rho = 0.25 * fock_density(0, 0) + 0.25 * fock_density(1, 0) + 0.5 * fock_density(1, 1)
    assert sector_populations(rho) == pytest.approx((0.25, 0.25, 0.5))
    assert purity(fock_density(1, 1)) == pytest.approx(1.0)
    assert purity(rho) < 1.0


def test_pure_density_validation():
    with pytest.raises(DomainError):
        pure_density(np.ones(6))
    with pytest.raises(DomainError):
        pure_density(np.ones(5) / np.sqrt(5))
    psi = np.zeros(6)
    psi[3] = 1.0
    assert np.allclose(pure_density(psi), fock_density(1, 1))


def test_assert_density_matrix_accepts_valid(rng):
    rho = random_density(rng)
    assert_density_matrix(rho)


def test_assert_density_matrix_rejects_defects():
    bad_trace = 0.5 * np.eye(DIM, dtype=complex)
    with pytest.raises(InvariantError):
        assert_density_matrix(bad_trace)
    non_hermitian = np.eye(DIM, dtype=complex) / DIM
    non_hermitian[0, 1] = 1e-6
    with pytest.raises(InvariantError):
        assert_density_matrix(non_hermitian)
    indefinite = np.eye(DIM, dtype=complex) / 4.0
    indefinite[5, 5] = -0.5
    with pytest.raises(InvariantError):
        assert_density_matrix(indefinite)
