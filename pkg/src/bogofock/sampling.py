"""Seeded random generators for operators, Hamiltonians and Fock vectors."""

from __future__ import annotations

import itertools

import numpy as np
from scipy.stats import ortho_group, unitary_group

from .fock import FockVector, WickHamiltonian
from .selfdual import BogoliubovOp, FiniteTypeOp, from_components, from_matrix, identity, zero


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_orthogonal(n, rng=None):
    if n == 0:
        return np.zeros((0, 0))
    if n == 1:
        return np.array([[1.0 if _rng(rng).random() < 0.5 else -1.0]])
    return ortho_group.rvs(n, random_state=_rng(rng))


def random_bogoliubov(window_modes=2, index=2, rng=None) -> BogoliubovOp:
    """Generic V: the first 2C columns of a random orthogonal matrix of size 2C + index."""
    rng = _rng(rng)
    if index % 2:
        raise ValueError("unsupported: odd index out of scope")
    c = 2 * window_modes
    q = random_orthogonal(c + index, rng)
    return BogoliubovOp.from_block(q[:, :c], index)


def random_unitary_bogoliubov(window_modes=2, rng=None) -> BogoliubovOp:
    """Random real orthogonal block with identity tail (index 0)."""
    return random_bogoliubov(window_modes, 0, rng)


def gauge_unitary(u) -> BogoliubovOp:
    """Bogoliubov unitary acting as u on K1 (and conj(u) on K2), identity elsewhere."""
    u = np.asarray(u, dtype=complex)
    one = np.eye(1)
    g11 = FiniteTypeOp(u, 0, one, "K1")
    g22 = FiniteTypeOp(u.conj(), 0, one, "K2")
    op = from_components(g11, zero("K2", "K1"), zero("K1", "K2"), g22)
    return BogoliubovOp(op)


def random_gauge(n_modes, rng=None) -> BogoliubovOp:
    if n_modes == 0:
        return BogoliubovOp(identity("K"))
    if n_modes == 1:
        return gauge_unitary(np.exp(2j * np.pi * _rng(rng).random()) * np.eye(1))
    return gauge_unitary(unitary_group.rvs(n_modes, random_state=_rng(rng)))


def mode_map(targets, conjugate, index) -> BogoliubovOp:
    """V f_n = f_{targets[n]} (or Gamma f_{targets[n]} where ``conjugate[n]``), shift ``index``.

    Targets must be distinct modes below len(targets) + index / 2.
    """
    n = len(targets)
    rows = 2 * n + index
    if len(set(targets)) != n or (n and max(targets) >= rows // 2):
        raise ValueError("targets must be distinct modes inside the block")
    block = np.zeros((rows, 2 * n))
    for src, (dst, conj) in enumerate(zip(targets, conjugate)):
        block[2 * dst, 2 * src] = 1.0
        block[2 * dst + 1, 2 * src + 1] = -1.0 if conj else 1.0
    return BogoliubovOp.from_block(block, index)


def random_with_kernel(window_modes=2, index=2, kernel_dim=1, rng=None) -> BogoliubovOp:
    """V = G1 M G2 with M a mode map sending ``kernel_dim`` modes into K2; dim ker V11 = kernel_dim."""
    rng = _rng(rng)
    if kernel_dim > window_modes:
        raise ValueError("kernel dimension exceeds the window")
    targets = list(rng.permutation(window_modes + index // 2)[:window_modes])
    conj = [j < kernel_dim for j in range(window_modes)]
    m = mode_map(targets, conj, index)
    left = random_gauge(window_modes + index // 2, rng)
    right = random_gauge(window_modes, rng)
    return left @ m @ right


def composed_curve(phis):
    """Product V(phi_1) ... V(phi_r); index 2r."""
    from .decompose import curve_v_phi

    out = curve_v_phi(phis[0])
    for phi in phis[1:]:
        out = out @ curve_v_phi(phi)
    return out


def random_antisymmetric(n, rng=None, scale=1.0):
    rng = _rng(rng)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a - a.T) / 2


def random_hamiltonian(n_modes=4, rng=None, scale=0.5) -> WickHamiltonian:
    """Random H: finite H11 block, antisymmetric H12 and H21 on the first n modes."""
    rng = _rng(rng)
    h11 = scale * (rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes)))
    return WickHamiltonian.from_parts(
        from_matrix(h11, "K1"),
        random_antisymmetric(n_modes, rng, scale),
        random_antisymmetric(n_modes, rng, scale),
    )


def random_fock_vector(n_modes=6, max_particles=3, n_terms=6, rng=None) -> FockVector:
    """Random normalized vector with at most ``max_particles`` particles on ``n_modes`` modes."""
    rng = _rng(rng)
    pool = [c for r in range(max_particles + 1) for c in itertools.combinations(range(n_modes), r)]
    picks = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    amps = rng.normal(size=len(picks)) + 1j * rng.normal(size=len(picks))
    vec = FockVector.from_dict({pool[i]: a for i, a in zip(picks, amps)})
    return vec.normalized()


def random_complex(n, rng=None):
    rng = _rng(rng)
    return rng.normal(size=n) + 1j * rng.normal(size=n)
