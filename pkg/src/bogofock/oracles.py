"""Independent dense reference computations used to cross-check the sparse engine.

Everything here works with explicit 2^n x 2^n Jordan-Wigner matrices or with
dense windows of finite-type operators, and shares no code path with the
factorized Wick exponential or the block arithmetic it is compared against.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse

from .clifford import HARD_MAX_MODES, jordan_wigner
from .fock import FockVector, WickHamiltonian
from .selfdual import PAIR_BASIS, FiniteTypeOp, adjoint, components, compose, gamma_conj


# --------------------------------------------------------------- Fock space
def fock_to_dense(vec: FockVector, n_modes: int) -> np.ndarray:
    if vec.mode_bound() >= n_modes:
        raise ValueError("vector occupies modes outside the dense window")
    out = np.zeros(2**n_modes, complex)
    out[vec.keys.astype(np.int64)] = vec.amps
    return out


def dense_to_fock(arr) -> FockVector:
    arr = np.asarray(arr, dtype=complex)
    keys = np.flatnonzero(arr)
    return FockVector(keys.astype(np.uint64), arr[keys])


def dense_one_body(coefs, annihilators, create=True):
    """sum_p c_p a+_p (create) or sum_p c_p a_p, as a dense matrix."""
    out = np.zeros_like(annihilators[0])
    for p, c in enumerate(coefs):
        if c != 0:
            out += c * (annihilators[p].conj().T if create else annihilators[p])
    return out


def _normal_powers(h11, annihilators):
    """Yield :N^l: for N = sum h11[p,q] a+_p a_q via :N^(l+1): = sum h11[p,q] a+_p :N^l: a_q."""
    sparse = [scipy.sparse.csr_matrix(a) for a in annihilators]
    dim = annihilators[0].shape[0]
    term = np.eye(dim, dtype=complex)
    ps, qs = np.nonzero(h11)
    while np.any(term):
        yield term
        nxt = np.zeros_like(term)
        for p, q in zip(ps, qs):
            left = sparse[p].conj().T @ term
            nxt += h11[p, q] * (sparse[q].T @ left.T).T
        term = nxt


def _powers(mat):
    dim = mat.shape[0]
    term = np.eye(dim, dtype=complex)
    while np.any(term):
        yield term
        term = term @ mat


def wick_exp_dense(h: WickHamiltonian, n_modes: int) -> np.ndarray:
    """:exp(b(H)/2): by the direct triple series sum_{i,j,k} A^i :N^j: C^k / (i! j! k!).

    A = (1/2) sum h12[p,q] a+_p a+_q, C = (1/2) sum h21[p,q] a_p a_q and
    N = sum h11[p,q] a+_p a_q.  All three series terminate.
    """
    if n_modes > HARD_MAX_MODES:
        raise ValueError("too many modes for the dense oracle")
    if h.lift.shift != 0:
        raise ValueError("the dense oracle needs an unshifted H11")
    a = jordan_wigner(n_modes)
    h11 = h.h11.matrix(n_modes, n_modes)
    check = h.h11.matrix(n_modes + 4, n_modes + 4)
    if np.max(np.abs(check[n_modes:]), initial=0.0) > 0 or np.max(np.abs(check[:, n_modes:]), initial=0.0) > 0:
        raise ValueError("H11 does not fit into the dense window")
    c = np.zeros((n_modes, n_modes), complex)
    d = np.zeros((n_modes, n_modes), complex)
    k = min(n_modes, h.h12.shape[0])
    if np.any(h.h12[n_modes:]) or np.any(h.h21[n_modes:]) or np.any(h.h12[:, n_modes:]) or np.any(h.h21[:, n_modes:]):
        raise ValueError("pair terms do not fit into the dense window")
    c[:k, :k] = h.h12[:k, :k]
    d[:k, :k] = h.h21[:k, :k]
    sparse = [scipy.sparse.csr_matrix(x) for x in a]
    zero = scipy.sparse.csr_matrix(a[0].shape, dtype=complex)
    create_pairs = 0.5 * sum((c[p, q] * sparse[p].conj().T @ sparse[q].conj().T for p, q in zip(*np.nonzero(c))), zero)
    annihilate_pairs = 0.5 * sum((d[p, q] * sparse[p] @ sparse[q] for p, q in zip(*np.nonzero(d))), zero)
    # the triple sum over (i, j, k) factorizes into three single series
    left = _series(_powers(create_pairs.toarray()))
    middle = _series(_normal_powers(h11, a))
    right = _series(_powers(annihilate_pairs.toarray()))
    return left @ middle @ right


def _series(terms):
    """sum_l terms[l] / l! for a terminating sequence of matrices."""
    total = None
    fact = 1.0
    for l, term in enumerate(terms):
        fact *= max(l, 1)
        total = term / fact if total is None else total + term / fact
    return total


# --------------------------------------------------- finite-type arithmetic
def dense_window(op: FiniteTypeOp, n: int) -> np.ndarray:
    """The n x n upper-left corner of the infinite matrix."""
    return op.matrix(n, n)


def _margin(*ops):
    return max(max(abs(o.shift), o.window, o.block.shape[0]) for o in ops) + 4


def arithmetic_residuals(a: FiniteTypeOp, b: FiniteTypeOp, n: int) -> dict:
    """Compare block arithmetic of two operators on K with dense windows of size n.

    Products use an inner dimension large enough that the corner is exact.
    """
    inner = n + _margin(a, b)
    inner += inner % 2
    da_wide = a.matrix(n, inner)
    db_tall = b.matrix(inner, n)
    out = {}
    out["compose"] = float(np.max(np.abs(compose(a, b).matrix(n, n) - da_wide @ db_tall)))
    if a.shift == b.shift:
        out["add"] = float(np.max(np.abs((a + b).matrix(n, n) - (a.matrix(n, n) + b.matrix(n, n)))))
    big = n + _margin(a)
    big += big % 2
    out["adjoint"] = float(np.max(np.abs(adjoint(a).matrix(n, n) - a.matrix(big, big).conj().T[:n, :n])))
    out["gamma_conj"] = float(np.max(np.abs(gamma_conj(a).matrix(n, n) - a.matrix(n, n).conj())))
    if a.dom == "K":
        unit = np.kron(np.eye(n // 2), PAIR_BASIS)
        inner_form = unit.conj().T @ a.matrix(n, n) @ unit
        worst = 0.0
        for idx, comp in enumerate(components(a)):
            r, c = divmod(idx, 2)
            worst = max(worst, float(np.max(np.abs(comp.matrix(n // 2, n // 2) - inner_form[r::2, c::2]))))
        out["components"] = worst
    return out


def random_finite_type(window=4, shift=2, rng=None, space="K") -> FiniteTypeOp:
    """Random operator with a random tail pattern (general complex entries)."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    p = 2 if space == "K" else 1
    rows = window + shift
    block = rng.normal(size=(rows, window)) + 1j * rng.normal(size=(rows, window))
    pattern = rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))
    # keep block rows and tail rows disjoint by construction (rows = window + shift)
    return FiniteTypeOp(block, shift, pattern, space, space)
