import numpy as np
import pytest
from conftest import dense_components

from bogofock.decompose import curve_v_phi
from bogofock.oracles import arithmetic_residuals, random_finite_type
from bogofock.sampling import composed_curve, random_bogoliubov, random_unitary_bogoliubov, random_with_kernel
from bogofock.selfdual import (
    MODES,
    PAIR_BASIS,
    BogoliubovOp,
    FiniteTypeOp,
    adjoint,
    cokernel_basis,
    compose,
    det_one_plus,
    from_components,
    from_matrix,
    gamma_conj,
    hs_norm,
    identity,
    index,
    kernel_basis,
    pseudo_inverse,
    rank,
    shift_op,
    statistical_dimension,
)


def test_pair_basis_is_unitary_and_mode_vectors_are_orthonormal():
    assert np.allclose(PAIR_BASIS.conj().T @ PAIR_BASIS, np.eye(2), atol=1e-15)
    f = np.array([MODES.f_vector(n, 8) for n in range(4)])
    assert np.allclose(f.conj() @ f.T, np.eye(4), atol=1e-15)
    # Gamma f_n is orthogonal to every f_m: K1 and K2 = Gamma K1 are complementary
    assert np.allclose(f.conj() @ MODES.gamma(f.T), 0, atol=1e-15)


def test_split_join_roundtrip(rng):
    k = rng.normal(size=10) + 1j * rng.normal(size=10)
    k1, k2 = MODES.split(k)
    assert np.allclose(MODES.join(k1, k2), k, atol=1e-15)
    # Gamma swaps the two components up to conjugation
    g1, g2 = MODES.split(MODES.gamma(k))
    assert np.allclose(g1, k2.conj()) and np.allclose(g2, k1.conj())


def test_shift_is_isometry_with_index():
    s = shift_op(4)
    assert (adjoint(s) @ s).max_abs_diff(identity()) == 0
    assert index(s) == 4
    assert cokernel_basis(s).dim == 4
    assert kernel_basis(s).dim == 0


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("shift", [-2, 0, 2, 4])
def test_arithmetic_matches_dense_windows(seed, shift):
    rng = np.random.default_rng(seed)
    a = random_finite_type(4, shift, rng)
    b = random_finite_type(2, 2, rng)
    res = arithmetic_residuals(a, b, 16)
    assert max(res.values()) <= 1e-12, res
    res = arithmetic_residuals(a, random_finite_type(6, shift, rng), 16)
    assert res["add"] <= 1e-12


def test_components_of_curve_operator():
    # derived by the dense pair-basis change of an exact window
    phi = np.pi / 8
    v = curve_v_phi(phi)
    v11, v12, v21, v22 = dense_components(v.op.dense(8))
    ours = [c.matrix(*v11.shape) for c in v.components]
    for dense, mine in zip((v11, v12, v21, v22), ours):
        assert np.max(np.abs(dense - mine)) <= 1e-15
    # the pair part V12 has rank 1 along the whole curve
    for angle in (0.0, np.pi / 8, np.pi / 3, 3 * np.pi / 4):
        assert rank(curve_v_phi(angle).components[1]) == 1


@pytest.mark.parametrize("make", [
    lambda r: curve_v_phi(np.pi / 3),
    lambda r: random_bogoliubov(3, 4, r),
    lambda r: random_with_kernel(3, 2, 1, r),
    lambda r: random_unitary_bogoliubov(3, r),
])
def test_component_relations_of_isometries(rng, make):
    v = make(rng)
    v11, v12, v21, v22 = v.components
    one1, one2 = identity("K1"), identity("K2")
    assert (adjoint(v11) @ v11 + adjoint(v21) @ v21).max_abs_diff(one1) <= 1e-12
    assert (adjoint(v12) @ v12 + adjoint(v22) @ v22).max_abs_diff(one2) <= 1e-12
    # Gamma-reality relates the off-diagonal blocks
    assert gamma_conj(v11).max_abs_diff(v22) <= 1e-14
    assert gamma_conj(v21).max_abs_diff(v12) <= 1e-14


def test_from_components_roundtrip(rng):
    v = random_bogoliubov(2, 2, rng)
    assert from_components(*v.components).max_abs_diff(v.op) <= 1e-14


def test_pseudo_inverse_relations(rng):
    v = random_with_kernel(3, 4, 2, rng)
    v11 = v.components[0]
    p = pseudo_inverse(v11)
    assert (v11 @ p @ v11).max_abs_diff(v11) <= 1e-12
    assert (p @ v11 @ p).max_abs_diff(p) <= 1e-12
    # V11^+ V11 is the projection onto (ker V11)^perp
    assert (p @ v11 + kernel_basis(v11).projector()).max_abs_diff(identity("K1")) <= 1e-12


def test_kernel_dimensions_and_index(rng):
    v = random_with_kernel(3, 4, 2, rng)
    assert kernel_basis(v.components[0]).dim == 2
    assert v.index == 4 and v.m == 2
    assert kernel_basis(v.op).dim == 0
    assert cokernel_basis(v.components[3]).dim == 2 + 2


def test_statistical_dimension_curve_and_multiplicativity():
    # closed form: ind V(phi)* = 2 and d = 2^(ind/2)
    for phi in (0.0, np.pi / 8, np.pi / 2):
        v = curve_v_phi(phi)
        assert v.index == 2 and statistical_dimension(v) == 2
    w = composed_curve([np.pi / 8, np.pi / 3, 1.0])
    assert w.index == 6 and statistical_dimension(w) == 8


def test_determinant_and_hs_norm_against_dense():
    rng = np.random.default_rng(5)
    f = from_matrix(0.3 * (rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))), "K1")
    dense = f.matrix(6, 6)
    assert abs(det_one_plus(identity("K1") + f) - np.linalg.det(np.eye(6) + dense)) <= 1e-12
    assert abs(hs_norm(f) - np.linalg.norm(dense)) <= 1e-12
    with pytest.raises(ValueError):
        det_one_plus(f)


def test_apply_matches_dense(rng):
    v = random_bogoliubov(2, 2, rng)
    k = rng.normal(size=6) + 1j * rng.normal(size=6)
    out = v.apply(k)
    dense = v.op.dense(6) @ k
    assert np.allclose(out[: len(dense)], dense, atol=1e-14)


def test_compose_shifts_add():
    v = compose(curve_v_phi(0.3).op, curve_v_phi(0.7).op)
    assert v.shift == 4


def test_bogoliubov_validation_errors():
    with pytest.raises(ValueError):
        BogoliubovOp(FiniteTypeOp(2 * np.eye(2), 0, np.eye(2), "K", "K"))
    with pytest.raises(ValueError):
        BogoliubovOp(FiniteTypeOp(np.zeros((0, 0)), -2, np.eye(2), "K", "K"))
    with pytest.raises(ValueError):
        # complex entries break Gamma-reality
        BogoliubovOp(FiniteTypeOp(np.array([[1j, 0], [0, 1j]]), 0, np.eye(2), "K", "K"))


def test_curve_square_matches_dense_24_window():
    v = curve_v_phi(np.pi / 8)
    vv = compose(v.op, v.op)
    assert index(vv) == 4
    dense = v.op.matrix(24, 30) @ v.op.matrix(30, 24)
    assert np.max(np.abs(vv.matrix(24, 24) - dense)) <= 1e-12


def test_adjoint_of_curve_matches_dense():
    v = curve_v_phi(np.pi / 4)
    assert np.max(np.abs(adjoint(v.op).matrix(12, 12) - v.op.matrix(16, 16).conj().T[:12, :12])) <= 1e-15


@pytest.mark.parametrize("seed", range(20))
def test_pseudo_inverse_four_relations_random(seed):
    rng = np.random.default_rng(seed)
    v11 = random_with_kernel(3, 2 + 2 * (seed % 2), 1 + seed % 2, rng).components[0]
    p = pseudo_inverse(v11)
    assert (v11 @ p @ v11).max_abs_diff(v11) <= 1e-12
    assert (p @ v11 @ p).max_abs_diff(p) <= 1e-12
    assert (adjoint(v11 @ p)).max_abs_diff(v11 @ p) <= 1e-12
    assert (adjoint(p @ v11)).max_abs_diff(p @ v11) <= 1e-12
    # against the SVD pseudo-inverse of a dense window
    n = 12
    dense = np.linalg.pinv(v11.matrix(n + 4, n), rcond=1e-10)
    assert np.max(np.abs(p.matrix(n, n + 4) - dense)) <= 1e-12
