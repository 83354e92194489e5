"""The selfdual CAR algebra of a finite-dimensional space as a matrix algebra.

The algebra C(K, Gamma) with dim K = 2n is realized in its Fock
representation on C^(2^n) (Jordan-Wigner ordering, basis index = occupation
bitmask), using the basis projection P1 of :mod:`bogofock.selfdual`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .selfdual import MODES

#: default and hard limits on the number of modes n (matrices are 2^n x 2^n)
DEFAULT_MAX_MODES = 6
HARD_MAX_MODES = 10


def jordan_wigner(n_modes):
    """Dense annihilation matrices a_0, ..., a_{n-1} on 2^n states."""
    if n_modes > HARD_MAX_MODES:
        raise ValueError(f"{n_modes} modes exceed the hard cap of {HARD_MAX_MODES}")
    dim = 2**n_modes
    states = np.arange(dim)
    ops = []
    for p in range(n_modes):
        a = np.zeros((dim, dim), complex)
        occ = (states >> p) & 1 == 1
        src = states[occ]
        below = np.array([bin(s & ((1 << p) - 1)).count("1") for s in src], dtype=int)
        a[src ^ (1 << p), src] = (-1.0) ** below
        ops.append(a)
    return ops


def multi_indices(n):
    """All strictly increasing tuples from range(n), ordered by length then lexicographically."""
    out = []
    for length in range(n + 1):
        out.extend(itertools.combinations(range(n), length))
    return out


@dataclass(frozen=True)
class FiniteSelfdualSpace:
    """K = C^(2n) with entrywise conjugation and the basis projection P1."""

    n_modes: int

    def __post_init__(self):
        if not 0 <= self.n_modes <= HARD_MAX_MODES:
            raise ValueError(f"number of modes must lie in 0..{HARD_MAX_MODES}")

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    @property
    def fock_dim(self) -> int:
        return 2**self.n_modes

    @cached_property
    def annihilators(self):
        return jordan_wigner(self.n_modes)

    def identity(self):
        return np.eye(self.fock_dim, dtype=complex)

    def generator(self, k):
        """pi(B(k)) = a(P1 k)* + a(P1 Gamma k)."""
        k = np.asarray(k, dtype=complex)
        if k.shape != (self.dim,):
            raise ValueError(f"vector of length {self.dim} expected, got {k.shape}")
        k1, k2 = MODES.split(k)
        out = np.zeros((self.fock_dim, self.fock_dim), complex)
        for p, a in enumerate(self.annihilators):
            out += k1[p] * a.conj().T + k2[p] * a
        return out

    def basis_generator(self, i):
        e = np.zeros(self.dim)
        e[i] = 1.0
        return self.generator(e)

    def monomial(self, ks):
        out = self.identity()
        for k in ks:
            out = out @ self.generator(k)
        return out

    def vacuum_expectation(self, a) -> complex:
        """<Omega, a Omega> (the Fock state of P1)."""
        return complex(a[0, 0])


def central_state(a) -> complex:
    """Normalized trace, the unique tracial state."""
    return complex(np.trace(a) / a.shape[0])


def operator_norm(a) -> float:
    return float(np.linalg.norm(a, 2))


def generator_norm_formula(k) -> float:
    """||B(k)|| from ||k|| and |<k, Gamma k>|."""
    k = np.asarray(k, dtype=complex)
    n2 = float(np.vdot(k, k).real)
    overlap = abs(np.sum(np.conj(k) * np.conj(k)))
    return float(np.sqrt(0.5 * (n2 + np.sqrt(max(n2 * n2 - overlap * overlap, 0.0)))))


# ----------------------------------------------------------------- splittings
def _check_split(space: FiniteSelfdualSpace, split):
    b = np.asarray(split, dtype=complex).reshape(space.dim, -1)
    if np.max(np.abs(b.imag), initial=0.0) > 1e-12:
        raise ValueError("split not Gamma-invariant: K2 must be spanned by real vectors")
    b = b.real
    if np.max(np.abs(b.T @ b - np.eye(b.shape[1])), initial=0.0) > 1e-12:
        raise ValueError("split vectors must be orthonormal")
    return b


def adapted_basis(space: FiniteSelfdualSpace, split):
    """Real orthonormal basis of K whose last columns are the split vectors of K2."""
    b = _check_split(space, split)
    n2 = b.shape[1]
    q, _ = np.linalg.qr(np.hstack([b, np.eye(space.dim)]))
    comp = q[:, n2 : space.dim]
    return np.hstack([comp, b])


def _majoranas(space, basis):
    return [np.sqrt(2.0) * space.generator(basis[:, i]) for i in range(basis.shape[1])]


def _products(mats, indices, identity):
    out = identity
    for i in indices:
        out = out @ mats[i]
    return out


def conditional_expectation(space: FiniteSelfdualSpace, a, split):
    """Trace-preserving conditional expectation of C(K) onto C(K1), K1 = split-complement.

    The element is expanded in the monomials of the Majorana generators of an
    adapted real basis (orthonormal for the trace form) and every monomial
    containing a generator from K2 is dropped.
    """
    basis = adapted_basis(space, split)
    n1 = space.dim - _check_split(space, split).shape[1]
    gam = _majoranas(space, basis[:, :n1])
    ident = space.identity()
    out = np.zeros_like(ident)
    for alpha in multi_indices(n1):
        m = _products(gam, alpha, ident)
        coef = central_state(m.conj().T @ a)
        if coef != 0:
            out += coef * m
    return out


def quasi_basis(space: FiniteSelfdualSpace, split):
    """[(beta, B_beta)] with B_j = sqrt(2) B(b_j) and B_beta the ordered product."""
    b = _check_split(space, split)
    gens = [np.sqrt(2.0) * space.generator(b[:, j]) for j in range(b.shape[1])]
    ident = space.identity()
    return [(beta, _products(gens, beta, ident)) for beta in multi_indices(b.shape[1])]


def watatani_index(space: FiniteSelfdualSpace, split) -> float:
    """sum_beta B_beta B_beta*, which must be a multiple of the identity."""
    total = sum(m @ m.conj().T for _, m in quasi_basis(space, split))
    scalar = central_state(total)
    res = float(np.max(np.abs(total - scalar * space.identity())))
    if res > 1e-9:
        raise ValueError(f"quasi-basis sum is not scalar (residual {res:.3e})")
    return float(scalar.real)


def quasi_basis_residual(space: FiniteSelfdualSpace, split, a) -> float:
    """|| sum_beta E(a B_beta) B_beta* - a ||_max."""
    total = np.zeros_like(a)
    for _, m in quasi_basis(space, split):
        total += conditional_expectation(space, a @ m, split) @ m.conj().T
    return float(np.max(np.abs(total - a)))


def minimality_check(space: FiniteSelfdualSpace, split, rng=None, samples=5):
    """Check Ind(E) E(A) = sum_beta B_beta A B_beta* on the even part of C(K2).

    Returns a dict with the index, the worst residual over the even monomials,
    the worst residual over random even elements, and the largest norm of
    sum_beta B_beta B_delta B_beta* for even delta != 0 (which must vanish).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    qb = quasi_basis(space, split)
    ind = watatani_index(space, split)

    def rhs(a):
        return sum(m @ a @ m.conj().T for _, m in qb)

    worst = 0.0
    worst_zero = 0.0
    even = [(beta, m) for beta, m in qb if len(beta) % 2 == 0]
    for beta, m in even:
        lhs = ind * conditional_expectation(space, m, split)
        r = rhs(m)
        worst = max(worst, float(np.max(np.abs(lhs - r))))
        if beta:
            worst_zero = max(worst_zero, float(np.max(np.abs(r))))
    worst_random = 0.0
    for _ in range(samples):
        coefs = rng.normal(size=len(even)) + 1j * rng.normal(size=len(even))
        a = sum(c * m for c, (_, m) in zip(coefs, even))
        lhs = ind * conditional_expectation(space, a, split)
        worst_random = max(worst_random, float(np.max(np.abs(lhs - rhs(a)))))
    return {
        "index": ind,
        "monomial_residual": worst,
        "random_residual": worst_random,
        "nontrivial_sum_norm": worst_zero,
    }


# ----------------------------------------------------------- bilinear elements
def bilinear(space: FiniteSelfdualSpace, h):
    """b(h) = sum_ij h_ij B(e_i) B(e_j)* for a matrix h on K (e-basis)."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (space.dim, space.dim):
        raise ValueError("matrix dimension does not match the space")
    gens = [space.basis_generator(i) for i in range(space.dim)]
    out = np.zeros((space.fock_dim, space.fock_dim), complex)
    for i, j in zip(*np.nonzero(h)):
        out += h[i, j] * gens[i] @ gens[j].conj().T
    return out


def flow_check(space: FiniteSelfdualSpace, h, ts=(0.0, 0.25, 0.5, 1.0), ks=None, rng=None) -> float:
    """max over t, k of || e^{t b(h)/2} B(k) e^{-t b(h)/2} - B(e^{t h} k) ||.

    Requires h* = -h and Gamma h Gamma = h (real antisymmetric).
    """
    h = np.asarray(h, dtype=complex)
    if np.max(np.abs(h + h.conj().T)) > 1e-12 or np.max(np.abs(h.imag)) > 1e-12:
        raise ValueError("flow check needs a real antisymmetric matrix")
    rng = np.random.default_rng(0) if rng is None else rng
    if ks is None:
        ks = [rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim) for _ in range(3)]
    b = bilinear(space, h)
    worst = 0.0
    for t in ts:
        u = scipy.linalg.expm(0.5 * t * b)
        u_inv = scipy.linalg.expm(-0.5 * t * b)
        g = scipy.linalg.expm(t * h)
        for k in ks:
            lhs = u @ space.generator(k) @ u_inv
            rhs = space.generator(g @ k)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
