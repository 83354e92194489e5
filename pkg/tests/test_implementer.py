import numpy as np
import pytest
from conftest import dense_associate_l12

from bogofock.decompose import curve_v_phi
from bogofock.fock import FockVector, WickHamiltonian, vacuum_norm
from bogofock.implementer import (
    ImplementerSet,
    associate,
    associate_residuals,
    creation_space_basis,
    cuntz_residuals,
    decomposition_witness,
    family_coefficients,
    family_span_residual,
    intertwining_residual,
    psi_relation_residuals,
    solution_family_dim,
    solution_family_member,
)
from bogofock.sampling import (
    random_bogoliubov,
    random_complex,
    random_fock_vector,
    random_unitary_bogoliubov,
    random_with_kernel,
)
from bogofock.selfdual import BogoliubovOp, cokernel_basis, identity


def _vectors(rng, count=4, n_modes=8, max_particles=3):
    return [random_fock_vector(n_modes, max_particles, 4, rng) for _ in range(count)] + [FockVector.vacuum()]


OPERATORS = {
    "curve_pi8": lambda r: curve_v_phi(np.pi / 8),
    "curve_3pi4": lambda r: curve_v_phi(3 * np.pi / 4),
    "random_ind2": lambda r: random_bogoliubov(2, 2, r),
    "random_ind4": lambda r: random_bogoliubov(2, 4, r),
    "kernel_ind4": lambda r: random_with_kernel(3, 4, 2, r),
    "unitary": lambda r: random_unitary_bogoliubov(2, r),
}


def test_identity_has_trivial_associate_and_family(rng):
    v = BogoliubovOp(identity("K"))
    a = associate(v)
    assert np.max(np.abs(a.l12_matrix)) == 0 and np.max(np.abs(a.l21_matrix)) == 0
    iset = ImplementerSet(v)
    assert len(iset) == 1
    vec = random_fock_vector(5, 2, 4, rng)
    assert iset.psi_beta_apply((), vec).distance(vec) <= 1e-15


@pytest.mark.parametrize("phi", [0.0, np.pi / 8, np.pi / 6, np.pi / 3, 1.2])
def test_curve_associate_frozen_values(phi):
    # derived with the dense pseudo-inverse oracle; closed form i tan(pi/4 - phi)
    l12 = associate(curve_v_phi(phi)).l12_matrix
    expected = np.array([[0, 1j * np.tan(np.pi / 4 - phi)], [-1j * np.tan(np.pi / 4 - phi), 0]])
    assert np.max(np.abs(l12[:2, :2] - expected)) <= 1e-12
    assert np.max(np.abs(l12[2:]), initial=0.0) <= 1e-15


@pytest.mark.parametrize("name", list(OPERATORS))
def test_associate_matches_dense_oracle(rng, name):
    v = OPERATORS[name](rng)
    dense = dense_associate_l12(v, 16)
    ours = associate(v).l12.matrix(*dense.shape)
    assert np.max(np.abs(dense - ours)) <= 1e-12


@pytest.mark.parametrize("name", list(OPERATORS))
def test_associate_defining_relations(rng, name):
    res = associate_residuals(associate(OPERATORS[name](rng)))
    assert max(res.values()) <= 1e-12, res


@pytest.mark.parametrize("name", list(OPERATORS))
def test_cuntz_intertwining_and_psi_car(rng, name):
    v = OPERATORS[name](rng)
    iset = ImplementerSet(v)
    assert len(iset) == 2 ** (v.index // 2)
    vectors = _vectors(rng)
    orth, compl = cuntz_residuals(iset, vectors)
    assert orth <= 1e-10 and compl <= 1e-9
    worst = 0.0
    for _ in range(5):
        k = random_complex(v.op.window + 4, rng)
        for beta in iset.multi_indices:
            worst = max(worst, intertwining_residual(iset, beta, k, vectors[0]))
    assert worst <= 1e-10
    car, vac = psi_relation_residuals(iset, vectors[:2])
    assert car <= 1e-10 and vac <= 1e-10


def test_psi0_maps_vacuum_to_unit_vector():
    for phi in (np.pi / 8, np.pi / 3, 3 * np.pi / 4):
        iset = ImplementerSet(curve_v_phi(phi))
        assert abs(iset.psi0_apply(FockVector.vacuum()).norm() - 1) <= 1e-12
        assert abs(iset.norm_const - 1 / vacuum_norm(iset.hamiltonian)) <= 1e-15


@pytest.mark.parametrize("name", ["curve_pi8", "random_ind4", "kernel_ind4"])
def test_adjoint_matches_window_oracle(rng, name):
    v = OPERATORS[name](rng)
    iset = ImplementerSet(v)
    vec = random_fock_vector(6, 3, 5, rng)
    for beta in iset.multi_indices:
        oracle, shell = iset.psi_beta_adjoint_by_window(beta, vec)
        assert shell <= 1e-12
        assert iset.psi_beta_adjoint_apply(beta, vec).distance(oracle) <= 1e-10


def test_creation_space_has_half_index_dimension(rng):
    for index in (2, 4, 6):
        v = random_bogoliubov(3, index, rng)
        basis = creation_space_basis(v)
        assert basis.shape[1] == index // 2
        # the basis lies in ker V*
        q = cokernel_basis(v.op).vectors
        assert np.allclose(q @ (q.conj().T @ basis), basis, atol=1e-10)


@pytest.mark.parametrize("m,expected", [(0, 0), (1, 0), (2, 1), (3, 3)])
def test_solution_family_dimension(rng, m, expected):
    v = random_bogoliubov(3, 2 * m, rng)
    assert solution_family_dim(v) == expected


def test_associate_has_minimal_norm_in_family(rng):
    v = random_bogoliubov(3, 6, rng)
    base = np.linalg.norm(associate(v).l12_matrix)
    for _ in range(5):
        h = solution_family_member(v, random_complex(3, rng))
        assert np.linalg.norm(h.h12) >= base - 1e-12


def test_family_member_spans_same_implementers(rng):
    v = random_bogoliubov(3, 4, rng)
    reference = ImplementerSet(v)
    other = ImplementerSet(v, hamiltonian=solution_family_member(v, [0.7 - 0.2j]))
    assert isinstance(other.hamiltonian, WickHamiltonian)
    vectors = _vectors(rng, 3)
    orth, compl = cuntz_residuals(other, vectors)
    assert orth <= 1e-10 and compl <= 1e-9
    assert family_span_residual(other, reference, vectors) <= 1e-10
    coef = family_coefficients(other, reference)
    assert np.allclose(coef.conj().T @ coef, np.eye(len(reference)), atol=1e-10)


def test_cyclic_decomposition_of_curve_states(rng):
    for phi, n_cyclic in [(np.pi / 8, 1), (np.pi / 4, 2), (3 * np.pi / 4, 2)]:
        res = decomposition_witness(curve_v_phi(phi), rng, n_monomials=15)
        assert res["n_cyclic"] == n_cyclic
        assert res["moment_residual"] <= 1e-10 and res["orbit_overlap"] <= 1e-10


def test_wrong_k_vectors_rejected():
    v = curve_v_phi(np.pi / 8)
    with pytest.raises(ArithmeticError):
        ImplementerSet(v, k_vectors=np.zeros((4, 0)))


def test_pure_shift_has_only_lift_part():
    from bogofock.selfdual import shift_op

    v = BogoliubovOp(shift_op(4))
    a = associate(v)
    assert np.max(np.abs(a.l12_matrix)) == 0 and np.max(np.abs(a.l21_matrix)) == 0
    # P1 + Lambda11 = (V11^+)* = V11 for the f-shift
    assert a.one_plus_l11.max_abs_diff(v.components[0]) <= 1e-15
    vec = random_fock_vector(4, 2, 3, np.random.default_rng(0))
    iset = ImplementerSet(v)
    orth, compl = cuntz_residuals(iset, [vec])
    assert orth <= 1e-12 and compl <= 1e-12


def test_curve_pi4_associate_determinant():
    from bogofock.selfdual import det_one_plus, from_matrix

    c = associate(curve_v_phi(np.pi / 4)).l12_matrix
    x = identity("K1") + from_matrix(c @ c.conj().T, "K1")
    assert abs(det_one_plus(x) - np.linalg.det(np.eye(c.shape[0]) + c @ c.conj().T)) <= 1e-12


def test_window_adjoint_gives_up_on_non_empty_shell(rng, monkeypatch):
    iset = ImplementerSet(random_bogoliubov(2, 2, rng))
    # images of states whose highest modes are 1 and 2 sit in both shells
    vec = iset.psi_beta_apply((), FockVector.basis((0, 1))) + iset.psi_beta_apply((), FockVector.basis((0, 2)))
    monkeypatch.setattr(iset, "adjoint_window", lambda v: 1)
    with pytest.raises(ArithmeticError):
        iset.psi_beta_adjoint_by_window((), vec)
    with pytest.raises(OverflowError):
        iset.psi_beta_adjoint_by_window((), vec, max_modes=1)
