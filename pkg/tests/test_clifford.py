import numpy as np
import pytest

from bogofock.clifford import (
    FiniteSelfdualSpace,
    adapted_basis,
    bilinear,
    central_state,
    conditional_expectation,
    flow_check,
    generator_norm_formula,
    jordan_wigner,
    minimality_check,
    operator_norm,
    quasi_basis,
    quasi_basis_residual,
    watatani_index,
)
from bogofock.selfdual import MODES


def _rand(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def test_jordan_wigner_car():
    a = jordan_wigner(3)
    for p in range(3):
        for q in range(3):
            anti = a[p] @ a[q].conj().T + a[q].conj().T @ a[p]
            assert np.allclose(anti, np.eye(8) * (p == q), atol=1e-15)
            assert np.allclose(a[p] @ a[q] + a[q] @ a[p], 0, atol=1e-15)


def test_generators_selfdual_car(rng):
    space = FiniteSelfdualSpace(3)
    k, l = _rand(rng, 6), _rand(rng, 6)
    bk, bl = space.generator(k), space.generator(l)
    # B(k)* = B(Gamma k) and {B(k)*, B(l)} = <k, l>
    assert np.allclose(bk.conj().T, space.generator(MODES.gamma(k)), atol=1e-13)
    assert np.allclose(bk.conj().T @ bl + bl @ bk.conj().T, np.vdot(k, l) * np.eye(8), atol=1e-12)


def test_generator_norm_formula(rng):
    space = FiniteSelfdualSpace(3)
    for _ in range(10):
        k = _rand(rng, 6)
        assert abs(operator_norm(space.generator(k)) - generator_norm_formula(k)) <= 1e-12
    # a real unit vector gives a self-adjoint generator of norm 1/sqrt(2)
    e = np.zeros(6)
    e[2] = 1.0
    assert abs(generator_norm_formula(e) - 1 / np.sqrt(2)) <= 1e-15


@pytest.mark.parametrize("n_modes,n2", [(2, 1), (3, 2), (4, 2), (4, 3)])
def test_watatani_index_is_power_of_two(n_modes, n2):
    # closed form: Index E = 2^(dim K2)
    space = FiniteSelfdualSpace(n_modes)
    split = np.eye(2 * n_modes)[:, 2 * n_modes - n2 :]
    assert abs(watatani_index(space, split) - 2**n2) <= 1e-10


def test_watatani_rotated_split(rng):
    from scipy.stats import ortho_group

    space = FiniteSelfdualSpace(3)
    q = ortho_group.rvs(6, random_state=1)
    assert abs(watatani_index(space, q[:, :3]) - 8) <= 1e-10
    a = _rand(rng, (8, 8))
    assert quasi_basis_residual(space, q[:, :3], a) <= 1e-10


def test_conditional_expectation_properties(rng):
    space = FiniteSelfdualSpace(3)
    split = np.eye(6)[:, 4:]
    e = lambda x: conditional_expectation(space, x, split)  # noqa: E731
    ident = space.identity()
    assert np.allclose(e(ident), ident, atol=1e-13)
    a = _rand(rng, (8, 8))
    ea = e(a)
    assert np.allclose(e(ea), ea, atol=1e-12)
    assert abs(central_state(ea) - central_state(a)) <= 1e-12
    # bimodule property over C(K1)
    basis = adapted_basis(space, split)
    x = space.generator(basis[:, 0]) @ space.generator(basis[:, 3])
    y = space.generator(basis[:, 1]) + 0.3 * ident
    assert np.allclose(e(x @ a @ y), x @ ea @ y, atol=1e-12)
    # generators of K2 are killed
    assert np.allclose(e(space.generator(split[:, 0])), 0, atol=1e-13)


def test_minimality(rng):
    space = FiniteSelfdualSpace(4)
    res = minimality_check(space, np.eye(8)[:, 6:], rng)
    assert res["index"] == pytest.approx(4.0, abs=1e-12)
    assert max(res["monomial_residual"], res["random_residual"], res["nontrivial_sum_norm"]) <= 1e-10


def test_quasi_basis_size():
    space = FiniteSelfdualSpace(3)
    assert len(quasi_basis(space, np.eye(6)[:, 3:])) == 8


def test_flow(rng):
    space = FiniteSelfdualSpace(3)
    h = rng.normal(size=(6, 6))
    h = h - h.T
    assert flow_check(space, h, rng=rng) <= 1e-8
    assert np.allclose(bilinear(space, np.zeros((6, 6))), 0)


def test_input_validation():
    space = FiniteSelfdualSpace(2)
    with pytest.raises(ValueError):
        space.generator(np.ones(3))
    with pytest.raises(ValueError):
        watatani_index(space, np.array([[1j], [0], [0], [0]]))
    with pytest.raises(ValueError):
        watatani_index(space, 2 * np.eye(4)[:, :1])
    with pytest.raises(ValueError):
        flow_check(space, np.eye(4))
    with pytest.raises(ValueError):
        FiniteSelfdualSpace(11)
