import numpy as np
import pytest

from bogofock.decompose import (
    basis_projection_from_T,
    chi,
    curve_v_phi,
    delta_metric,
    example_U,
    factor_U,
    orbit_witness,
    p_v,
    polar_W,
)
from bogofock.fock import FockVector
from bogofock.implementer import associate
from bogofock.sampling import (
    composed_curve,
    random_antisymmetric,
    random_bogoliubov,
    random_fock_vector,
    random_unitary_bogoliubov,
    random_with_kernel,
)
from bogofock.selfdual import MODES, adjoint, gamma_conj, identity, kernel_basis, p1_op


def test_character_counterexample():
    # closed form: chi(V(3pi/4)) = -1, chi(V(pi/2)) = +1 and U V(3pi/4) = V(pi/2)
    u, a, b = example_U(), curve_v_phi(3 * np.pi / 4), curve_v_phi(np.pi / 2)
    assert chi(a) == -1 and chi(b) == 1 and chi(u) == 1
    assert (u @ a).op.max_abs_diff(b.op) <= 1e-12
    assert chi(u @ a) != chi(u) * chi(a)


def test_character_multiplicative_on_unitaries(rng):
    for _ in range(10):
        u, w = random_unitary_bogoliubov(2, rng), random_unitary_bogoliubov(2, rng)
        assert chi(u @ w) == chi(u) * chi(w)


def test_basis_projection_from_antisymmetric_t(rng):
    t = random_antisymmetric(3, rng)
    proj, u_t = basis_projection_from_T(t)
    assert (proj @ proj).max_abs_diff(proj) <= 1e-12
    assert (adjoint(proj)).max_abs_diff(proj) <= 1e-12
    # Gamma P Gamma = 1 - P
    assert (gamma_conj(proj) + proj).max_abs_diff(identity()) <= 1e-12
    assert (u_t.op @ p1_op() @ adjoint(u_t.op)).max_abs_diff(proj) <= 1e-12
    zero_proj, zero_u = basis_projection_from_T(np.zeros((2, 2)))
    assert zero_proj.max_abs_diff(p1_op()) <= 1e-15 and zero_u.op.max_abs_diff(identity()) <= 1e-15
    with pytest.raises(ValueError):
        basis_projection_from_T(np.ones((2, 2)))


def test_p_v_is_basis_projection_containing_creation_space(rng):
    v = random_bogoliubov(3, 4, rng)
    proj, _ = p_v(v)
    assert (gamma_conj(proj) + proj).max_abs_diff(identity()) <= 1e-12
    # ran(P1 - Lambda12*) applied to f_0 lies in ran P_V
    c = associate(v).l12_matrix
    f0 = np.zeros(c.shape[0], complex)
    f0[0] = 1.0
    k = MODES.join(f0, -c.conj().T @ f0)
    assert np.linalg.norm(proj.apply(k)[: len(k)] - k) <= 1e-12


@pytest.mark.parametrize("make", [
    lambda r: curve_v_phi(np.pi / 8),
    lambda r: curve_v_phi(3 * np.pi / 4),
    lambda r: random_with_kernel(3, 4, 2, r),
    lambda r: random_bogoliubov(3, 6, r),
])
def test_factorization(rng, make):
    v = make(rng)
    d = factor_U(v)
    assert d.reconstruction_residual() <= 1e-12
    assert d.U.index == 0
    assert d.W.index == v.index
    # W11 is a partial isometry with the kernel of V11
    w11 = d.W.components[0]
    assert kernel_basis(w11).dim == kernel_basis(v.components[0]).dim
    # the pair parts of the associate of W vanish, the associate of U agrees with that of V
    aw = associate(d.W)
    assert np.max(np.abs(aw.l12_matrix), initial=0.0) <= 1e-14
    assert np.max(np.abs(aw.l21_matrix), initial=0.0) <= 1e-14
    lu, lv = associate(d.U).l12_matrix, associate(v).l12_matrix
    n = max(lu.shape[0], lv.shape[0])
    pad = lambda x: np.pad(x, ((0, n - x.shape[0]), (0, n - x.shape[1])))  # noqa: E731
    assert np.max(np.abs(pad(lu) - pad(lv))) <= 1e-10


def test_implementer_factorization(rng):
    v = random_with_kernel(3, 4, 1, rng)
    iv, iw, iu = factor_U(v).implementer_sets()
    vectors = [FockVector.vacuum()] + [random_fock_vector(6, 3, 4, rng) for _ in range(4)]
    for beta in iv.multi_indices:
        for vec in vectors:
            lhs = iu.psi0_apply(iw.psi_beta_apply(beta, vec))
            assert lhs.distance(iv.psi_beta_apply(beta, vec)) <= 1e-9


def test_polar_w_index():
    w = polar_W(curve_v_phi(np.pi / 3))
    assert w.index == 2


def test_orbit_witness_relates_equal_index_operators(rng):
    pairs = [
        (curve_v_phi(np.pi / 8), curve_v_phi(3 * np.pi / 4)),
        (random_bogoliubov(2, 4, rng), composed_curve([0.4, 1.1])),
        (random_with_kernel(3, 2, 1, rng), random_bogoliubov(2, 2, rng)),
    ]
    for v, vp in pairs:
        x = orbit_witness(v, vp)
        assert x.index == 0
        assert (x @ vp).op.max_abs_diff(v.op) <= 1e-10
    with pytest.raises(ValueError):
        orbit_witness(curve_v_phi(0.1), random_bogoliubov(2, 4, rng))


def test_delta_metric():
    a, b = curve_v_phi(0.3), curve_v_phi(0.3001)
    value, exact = delta_metric(a, b)
    assert exact and 0 < value < 1e-3
    assert delta_metric(a, a) == (0.0, True)
    value, exact = delta_metric(a, composed_curve([0.1, 0.2]))
    assert not exact and value == pytest.approx(np.sqrt(2))


def test_polar_factor_properties(rng):
    from bogofock.quasifree import idempotence_residual, induced_state

    for v in (curve_v_phi(np.pi / 3), random_with_kernel(3, 4, 2, rng)):
        w = polar_W(v)
        s_w = induced_state(w).op
        assert w.index == v.index
        assert idempotence_residual(s_w) <= 1e-12
        assert (p1_op() @ s_w - s_w @ p1_op()).max_abs_diff(p1_op() - p1_op()) <= 1e-12


def test_p_v_of_curve():
    v = curve_v_phi(np.pi / 8)
    proj, _ = p_v(v)
    assert (proj @ proj).max_abs_diff(proj) <= 1e-12
    assert adjoint(proj).max_abs_diff(proj) <= 1e-12
    c = associate(v).l12_matrix
    for j in range(c.shape[0]):
        f = np.zeros(c.shape[0], complex)
        f[j] = 1.0
        k = MODES.join(f, -c.conj().T @ f)
        assert np.linalg.norm(proj.apply(k)[: len(k)] - k) <= 1e-12
