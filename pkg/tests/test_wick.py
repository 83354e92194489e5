import numpy as np
import pytest

from bogofock.fock import FockVector, WickHamiltonian, vacuum_norm, wick_exp, wick_exp_adjoint
from bogofock.fock.wick import commutator_residuals, relation_residuals
from bogofock.oracles import fock_to_dense, wick_exp_dense
from bogofock.sampling import random_antisymmetric, random_complex, random_fock_vector, random_hamiltonian
from bogofock.selfdual import from_matrix, identity, shift_op

N = 5


@pytest.mark.parametrize("seed", range(6))
def test_factorized_exponential_matches_direct_series(seed):
    rng = np.random.default_rng(seed)
    h = random_hamiltonian(N, rng)
    dense = wick_exp_dense(h, N)
    v = random_fock_vector(N, 3, 6, rng)
    got = fock_to_dense(wick_exp(h, v), N)
    assert np.max(np.abs(got - dense @ fock_to_dense(v, N))) <= 1e-10
    got_adj = fock_to_dense(wick_exp_adjoint(h, v), N)
    assert np.max(np.abs(got_adj - dense.conj().T @ fock_to_dense(v, N))) <= 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_vacuum_norm_is_determinant_power(seed):
    rng = np.random.default_rng(seed)
    c = random_antisymmetric(4, rng)
    h = WickHamiltonian(identity("K1"), c, np.zeros((4, 4)))
    norm = wick_exp(h, FockVector.vacuum()).norm()
    assert abs(norm - np.linalg.det(np.eye(4) + c @ c.conj().T).real ** 0.25) <= 1e-12
    assert abs(norm - vacuum_norm(h)) <= 1e-12


def test_vacuum_norm_frozen_value():
    # pair datum of the curve operator at phi = pi/8, norm = sec(pi/8) from the dense expm oracle
    t = np.tan(np.pi / 8)
    h = WickHamiltonian(identity("K1"), np.array([[0, 1j * t], [-1j * t, 0]]), np.zeros((2, 2)))
    assert abs(vacuum_norm(h) - 1.0823922002923938) <= 1e-14


@pytest.mark.parametrize("seed", range(8))
def test_commutation_relations(seed):
    rng = np.random.default_rng(seed)
    h = random_hamiltonian(4, rng)
    f, g = random_complex(4, rng), random_complex(4, rng)
    v = random_fock_vector(6, 3, 5, rng)
    assert max(relation_residuals(h, f, g, v)) <= 1e-10
    assert max(commutator_residuals(h, f, g, v)) <= 1e-10


def test_relations_with_shifted_lift(rng):
    # 1 + H11 may be a shifted isometry on K1; only the lift form applies
    h = WickHamiltonian(shift_op(2, "K1"), random_antisymmetric(3, rng), random_antisymmetric(3, rng))
    f, g = random_complex(3, rng), random_complex(5, rng)
    v = random_fock_vector(4, 2, 4, rng)
    assert max(relation_residuals(h, f, g, v)) <= 1e-10
    with pytest.raises(ValueError):
        commutator_residuals(h, f, g, v)


def test_zero_hamiltonian_is_identity(rng):
    v = random_fock_vector(5, 3, 6, rng)
    assert wick_exp(WickHamiltonian.zero(), v).distance(v) == 0


def test_rejects_non_antisymmetric():
    with pytest.raises(ValueError):
        WickHamiltonian(identity("K1"), np.array([[0, 1], [0, 0]]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        WickHamiltonian(from_matrix(np.eye(2), "K2"), np.zeros((2, 2)), np.zeros((2, 2)))
