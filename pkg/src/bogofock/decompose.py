"""Product decomposition V = U W, basis projections P_V and the character chi.

W is the "polar" factor of V (W11 the partial isometry of the polar
decomposition of V11, W21 = V21 restricted to ker V11) and U = V W* + u is
unitary with u a Gamma-real partial isometry from ker W* onto ker V*.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .implementer import ImplementerSet, associate
from .selfdual import (
    MODES,
    BogoliubovOp,
    FiniteTypeOp,
    adjoint,
    cokernel_basis,
    from_components,
    from_matrix,
    gamma_conj,
    hs_norm,
    kernel_basis,
    orthonormal_range,
)
from .fock.wick import antisymmetry_residual


# ------------------------------------------------------- explicit operators
def curve_v_phi(phi: float) -> BogoliubovOp:
    """V(phi): e0 -> cos(phi) e0 + sin(phi) e3, e1 -> sin(phi) e1 - cos(phi) e2, then shift by 2.

    In modes: f0 -> cos(phi) f0 + sin(phi) Gamma f1 (up to the pair convention),
    and e_j -> e_{j+2} for j >= 2.  Index 2 for every phi.
    """
    c, s = np.cos(phi), np.sin(phi)
    block = np.array([[c, 0.0], [0.0, s], [0.0, -c], [s, 0.0]])
    return BogoliubovOp.from_block(block, 2)


def example_U() -> BogoliubovOp:
    """The unitary with U11 = (E0 + E1)/sqrt(2) + sum_{n>=2} E_n that maps V(3pi/4) to V(pi/2)."""
    block = np.array(
        [
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, -1.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0, 1.0],
        ]
    ) / np.sqrt(2.0)
    return BogoliubovOp.from_block(block, 0)


def chi(v: BogoliubovOp) -> int:
    """(-1)^(dim ker V11)."""
    return -1 if kernel_basis(v.components[0]).dim % 2 else 1


# -------------------------------------------------------- basis projections
def _check_antisymmetric(t):
    t = np.atleast_2d(np.asarray(t, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(t), initial=0.0)))
    res = antisymmetry_residual(t)
    if res > 1e-12 * scale:
        raise ValueError(f"T must be antisymmetric (residual {res:.3e})")
    return (t - t.T) / 2


def basis_projection_from_T(t):
    """(P, U_T) for the basis projection with ran P = ran(P1 + T).

    ``t`` is the matrix t[p, q] = <Gamma f_p, T f_q> of a finite-rank operator
    T: K1 -> K2.  P = (P1 + T)(P1 + T*T)^(-1)(P1 + T*) and
    U_T = A + Gamma A Gamma with A = (P1 + T)(P1 + T*T)^(-1/2), so U_T P1 U_T* = P.
    """
    t = _check_antisymmetric(t)
    n = t.shape[0]
    gram = np.eye(n) + t.conj().T @ t
    inv = np.linalg.inv(gram)
    inv_sqrt = scipy.linalg.sqrtm(inv)
    inv_sqrt = (inv_sqrt + inv_sqrt.conj().T) / 2
    one = np.eye(1)
    p11 = FiniteTypeOp(inv, 0, one, "K1")
    p12 = from_matrix(inv @ t.conj().T, "K2", "K1")
    p21 = from_matrix(t @ inv, "K1", "K2")
    p22 = from_matrix(t @ inv @ t.conj().T, "K2")
    proj = from_components(p11, p12, p21, p22).trimmed(1e-15)
    a11 = FiniteTypeOp(inv_sqrt, 0, one, "K1")
    a21 = from_matrix(t @ inv_sqrt, "K1", "K2")
    u_t = from_components(a11, gamma_conj(a21), a21, gamma_conj(a11))
    return proj, BogoliubovOp(u_t)


def p_v(v: BogoliubovOp, assoc=None):
    """Basis projection P_V with ran P_V = ran(P1 - Lambda12*), and its U_T."""
    assoc = associate(v) if assoc is None else assoc
    c = assoc.l12_matrix
    return basis_projection_from_T(-c.conj().T)


# ------------------------------------------------------------ factorization
def polar_W(v: BogoliubovOp) -> BogoliubovOp:
    """W with W11 the polar isometry of V11, W21 = V21 P_{ker V11}, W22, W12 by Gamma-conjugation."""
    v11, _, v21, _ = v.components
    u, s, vh = np.linalg.svd(v11.block, full_matrices=False)
    r = int(np.sum(s > max(1e-9 * s[0], 1e-10))) if s.size else 0
    w11 = FiniteTypeOp(u[:, :r] @ vh[:r], v11.shift, v11.pattern, "K1", "K1")
    w21 = (v21 @ kernel_basis(v11).projector()).trimmed(1e-15)
    op = from_components(w11, gamma_conj(w21), w21, gamma_conj(w11))
    return BogoliubovOp(op)


def _columns(vecs, n):
    """Pad (or cut negligible trailing rows of) column vectors to length n."""
    if vecs.shape[0] > n:
        if np.max(np.abs(vecs[n:]), initial=0.0) > 1e-13:
            raise ValueError("vector support exceeds the working window")
        vecs = vecs[:n]
    out = np.zeros((n, vecs.shape[1]), complex)
    out[: vecs.shape[0]] = vecs
    return out


def _apply_cols(op, cols, n):
    if cols.shape[1] == 0:
        return np.zeros((n, 0), complex)
    return np.array([_columns(op.apply(cols[:, j])[:, None], n)[:, 0] for j in range(cols.shape[1])]).T


def k1_part_basis(w: BogoliubovOp):
    """Orthonormal basis (f-coordinates) of P1(ker W*)."""
    q = cokernel_basis(w.op).vectors
    if q.shape[1] == 0:
        return np.zeros((0, 0), complex)
    k1 = np.array([MODES.split(q[:, j])[0] for j in range(q.shape[1])]).T
    return orthonormal_range(k1)


def _embed_k1(f, n_modes):
    """f-coordinate columns -> e-coordinate columns of length 2 n_modes."""
    f = _columns(f, n_modes)
    return np.array([MODES.join(f[:, j], None) for j in range(f.shape[1])]).T.reshape(2 * n_modes, -1)


def r_v_apply(v: BogoliubovOp, l12_matrix, f):
    """R_V f = (P1 - Lambda12*)(P1 + V11 V21* Lambda12*) f for columns f in P1(ker W*).

    Returns e-coordinate columns.
    """
    v11, _, v21, _ = v.components
    v21_adj = adjoint(v21)
    c = l12_matrix
    n = max(c.shape[0], f.shape[0], v11.window + v11.shift + 2, v21.window + v21.shift + 2)
    f = _columns(f, n)
    cc = np.zeros((n, n), complex)
    cc[: c.shape[0], : c.shape[1]] = c
    lam_adj_f = cc.conj().T @ f
    g = f + _apply_cols(v11, _apply_cols(v21_adj, lam_adj_f, n), n)
    k2 = -cc.conj().T @ g
    return np.array([MODES.join(g[:, j], k2[:, j]) for j in range(g.shape[1])]).T.reshape(2 * n, -1)


@dataclass
class Decomposition:
    v: BogoliubovOp
    w: BogoliubovOp
    u_factor: BogoliubovOp
    partial_isometry: FiniteTypeOp
    basis_projection: FiniteTypeOp
    initial_basis: np.ndarray
    final_basis: np.ndarray

    @property
    def U(self):
        return self.u_factor

    @property
    def W(self):
        return self.w

    def reconstruction_residual(self) -> float:
        return (self.u_factor.op @ self.w.op).max_abs_diff(self.v.op)

    def implementer_sets(self):
        """(set for V, set for W, set for U) with compatible bases.

        The W family reuses the kernel basis e_r of V11 (= ker W11) and uses
        the k-vectors U* k_j, so that Psi_0(U) Psi_beta(W) = Psi_beta(V).
        """
        iv = ImplementerSet(self.v)
        if iv.m:
            kw = np.array([self.u_factor.op.H.apply(iv.k_vectors[:, j]) for j in range(iv.m)]).T
        else:
            kw = np.zeros((2, 0), complex)
        iw = ImplementerSet(self.w, kernel_vectors=iv.kernel_vectors, k_vectors=kw)
        iu = ImplementerSet(self.u_factor)
        return iv, iw, iu


def factor_U(v: BogoliubovOp) -> Decomposition:
    """V = U W with U = V W* + u, u the Gamma-real polar part of R_V."""
    assoc = associate(v)
    w = polar_W(v)
    proj, _ = p_v(v, assoc)
    f = k1_part_basis(w)
    if f.shape[1] != v.m:
        raise ArithmeticError(f"P1(ker W*) has dimension {f.shape[1]}, expected {v.m}")
    if v.m == 0:
        u_op = from_matrix(np.zeros((2, 2)), "K")
        g_e = np.zeros((2, 0), complex)
        f_e = np.zeros((2, 0), complex)
    else:
        g_e = r_v_apply(v, assoc.l12_matrix, f)
        gram = g_e.conj().T @ g_e
        s = np.linalg.eigvalsh(gram)
        if s.min() < 1e-10:
            raise ArithmeticError("R_V is numerically singular")
        g_e = g_e @ scipy.linalg.sqrtm(np.linalg.inv(gram))
        n = max(g_e.shape[0], 2 * f.shape[0])
        g_e = _columns(g_e, n)
        f_e = _columns(_embed_k1(f, f.shape[0]), n)
        u1 = g_e @ f_e.conj().T
        u_op = from_matrix(u1 + u1.conj(), "K")
    u_full = (v.op @ w.op.H + u_op).trimmed(1e-15)
    if np.max(np.abs(u_full.block.imag), initial=0.0) > 1e-10:
        raise ArithmeticError("U is not Gamma-real")
    u_full = FiniteTypeOp(u_full.block.real, u_full.shift, u_full.pattern, "K", "K")
    return Decomposition(
        v=v,
        w=w,
        u_factor=BogoliubovOp(u_full, atol=1e-10),
        partial_isometry=u_op,
        basis_projection=proj,
        initial_basis=f_e,
        final_basis=g_e,
    )


def orbit_witness(v: BogoliubovOp, v_prime: BogoliubovOp) -> BogoliubovOp:
    """Unitary X = U U'' U'* with X V' = V, for V, V' of equal index.

    U, U' are the unitary factors of V = U W and V' = U' W'; U'' = W W'* + u''
    with u'' a Gamma-real partial isometry from ker W'* onto ker W*.
    """
    if v.index != v_prime.index:
        raise ValueError("orbit witness requires equal indices")
    d, dp = factor_U(v), factor_U(v_prime)
    n = max(d.initial_basis.shape[0], dp.initial_basis.shape[0], 2)
    fa = _columns(d.initial_basis, n)
    fb = _columns(dp.initial_basis, n)
    u1 = fa @ fb.conj().T
    mid = d.w.op @ dp.w.op.H + from_matrix(u1 + u1.conj(), "K")
    x = (d.u_factor.op @ mid @ dp.u_factor.op.H).trimmed(1e-15)
    return BogoliubovOp(FiniteTypeOp(x.block.real, x.shift, x.pattern, "K", "K"), atol=1e-10)


def delta_metric(v: BogoliubovOp, v_prime: BogoliubovOp):
    """(||V - V'|| + ||V12 - V'12||_2, exact).

    For different tail shifts the operator norm cannot be evaluated on a
    window; sqrt(2), a lower bound for the norm term, is returned with
    ``exact = False``.
    """
    if v.index != v_prime.index:
        return float(np.sqrt(2.0)), False
    diff = v.op - v_prime.op
    op_norm = float(np.linalg.norm(diff.block, 2)) if diff.block.size else 0.0
    return op_norm + hs_norm(v.components[1] - v_prime.components[1]), True
