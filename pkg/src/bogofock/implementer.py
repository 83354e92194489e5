"""The associate of a Bogoliubov operator and its family of implementing isometries.

For a Bogoliubov operator V of index 2m the family {Psi_beta(V)} consists of
2^m isometries on Fock space with

    Psi_beta* Psi_delta = delta_{beta,delta},   sum_beta Psi_beta Psi_beta* = 1,
    Psi_beta pi(B(k)) = pi(B(V k)) Psi_beta.

Psi_0(V) is a normalized Wick exponential of the associate Lambda_V dressed
with the kernel of V11, and Psi_beta = psi(k_beta1) ... psi(k_betar) Psi_0
for an orthonormal basis k_1..k_m of ker V* intersected with ran(P1 - Lambda12*).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .clifford import multi_indices
from .fock import (
    FockVector,
    WickHamiltonian,
    annihilate,
    create,
    field,
    linear_combination,
    parity,
    psi,
    psi_adjoint,
    vacuum_norm,
    wick_exp,
    wick_exp_adjoint,
)
from .fock.vector import key_to_modes
from .selfdual import (
    MODES,
    RANK_RTOL,
    BogoliubovOp,
    FiniteTypeOp,
    adjoint,
    cokernel_basis,
    from_matrix,
    identity,
    kernel_basis,
    null_space,
    orthonormal_range,
    pseudo_inverse,
)


def _mode_matrix(op: FiniteTypeOp, n=None):
    """Square matrix of a finite-rank operator between K1/K2 in mode coordinates."""
    if not op.tail_is_zero:
        raise ValueError("expected a finite-rank operator")
    size = max(op.window, op.block.shape[0], 1) if n is None else n
    return op.matrix(size, size)


def _pad_rows(mat, n):
    out = np.zeros((n, mat.shape[1]), complex)
    out[: mat.shape[0]] = mat
    return out


def _apply_cols(op: FiniteTypeOp, cols):
    """Apply an operator to each column of a matrix; results padded to equal length."""
    if cols.shape[1] == 0:
        return np.zeros((max(op.window + op.shift, 1), 0), complex)
    outs = [op.apply(cols[:, j]) for j in range(cols.shape[1])]
    n = max(len(o) for o in outs)
    return np.array([np.concatenate([o, np.zeros(n - len(o))]) for o in outs]).T


def _split_cols(q):
    """Columns of e-coordinates -> (K1 coordinates, K2 coordinates)."""
    if q.shape[1] == 0:
        n = q.shape[0] // 2
        return np.zeros((n, 0), complex), np.zeros((n, 0), complex)
    parts = [MODES.split(q[:, j]) for j in range(q.shape[1])]
    return np.array([p[0] for p in parts]).T, np.array([p[1] for p in parts]).T


@dataclass(frozen=True)
class Associate:
    """Lambda_V and the auxiliary operators it is built from.

    ``one_plus_l11`` = P1 + Lambda11 and ``one_minus_l22`` = P2 - Lambda22 are
    stored instead of Lambda11 and Lambda22, which carry two different tails
    when the index is nonzero.
    """

    v: BogoliubovOp
    l12: FiniteTypeOp
    l21: FiniteTypeOp
    one_plus_l11: FiniteTypeOp
    one_minus_l22: FiniteTypeOp
    v11_inv: FiniteTypeOp
    v22_inv: FiniteTypeOp
    ker_v11_adj: FiniteTypeOp
    ker_v22_adj: FiniteTypeOp

    @cached_property
    def l12_matrix(self):
        n = self.size
        return _mode_matrix(self.l12, n)

    @cached_property
    def l21_matrix(self):
        return _mode_matrix(self.l21, self.size)

    @property
    def size(self):
        return max(self.l12.window, self.l12.block.shape[0], self.l21.window, self.l21.block.shape[0], 1)

    def hamiltonian(self) -> WickHamiltonian:
        return WickHamiltonian(self.one_plus_l11, self.l12_matrix, self.l21_matrix)


def associate(v: BogoliubovOp) -> Associate:
    """Lambda_V from pseudo-inverses of V11, V22 and the cokernel projections."""
    v11, v12, v21, v22 = v.components
    v11i = pseudo_inverse(v11)
    v22i = pseudo_inverse(v22)
    pk11 = cokernel_basis(v11).projector()
    pk22 = cokernel_basis(v22).projector()
    v11i_adj = adjoint(v11i)
    l12 = v12 @ v22i - v11i_adj @ adjoint(v21) @ pk22
    one_plus_l11 = v11i_adj - pk11 @ v12 @ v22i @ v21
    one_minus_l22 = v22i - adjoint(v12) @ v11i_adj @ adjoint(v21) @ pk22
    l21 = one_minus_l22 @ v21
    return Associate(
        v=v,
        l12=l12.trimmed(1e-15),
        l21=l21.trimmed(1e-15),
        one_plus_l11=one_plus_l11.trimmed(1e-15),
        one_minus_l22=one_minus_l22.trimmed(1e-15),
        v11_inv=v11i,
        v22_inv=v22i,
        ker_v11_adj=pk11,
        ker_v22_adj=pk22,
    )


# ------------------------------------------------------------ solution family
def family_subspaces(v: BogoliubovOp):
    """(X, Y): X = ker V22* minus V21(ker V11) in K2, Y = ker V11* minus V12(ker V22) in K1.

    Returned as orthonormal columns in mode coordinates of a common length.
    """
    v11, v12, v21, v22 = v.components
    ker22_adj = cokernel_basis(v22).vectors
    ker11_adj = cokernel_basis(v11).vectors
    img21 = orthonormal_range(_apply_cols(v21, kernel_basis(v11).vectors))
    img12 = orthonormal_range(_apply_cols(v12, kernel_basis(v22).vectors))
    n = max(ker22_adj.shape[0], ker11_adj.shape[0], img21.shape[0], img12.shape[0])

    def complement(space, sub):
        space, sub = _pad_rows(space, n), _pad_rows(sub, n)
        if sub.shape[1] == 0:
            return space
        rest = space - sub @ (sub.conj().T @ space)
        return orthonormal_range(rest)

    return complement(ker22_adj, img21), complement(ker11_adj, img12)


def solution_family_dim(v: BogoliubovOp, rtol=RANK_RTOL) -> int:
    """Dimension of the antisymmetric h12 allowed in the solution family.

    Computed as the null-space dimension of the linear constraints
    h (1 - P_X) = 0 and (1 - P_Y) h = 0 on antisymmetric matrices.
    """
    x, y = family_subspaces(v)
    n = x.shape[0]
    if n < 2:
        return 0
    px = x @ x.conj().T
    py = y @ y.conj().T
    qx = np.eye(n) - px
    qy = np.eye(n) - py
    columns = []
    for a, b in itertools.combinations(range(n), 2):
        h = np.zeros((n, n), complex)
        h[a, b], h[b, a] = 1.0, -1.0
        columns.append(np.concatenate([(h @ qx).ravel(), (qy @ h).ravel()]))
    system = np.array(columns).T
    s = np.linalg.svd(system, compute_uv=False)
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return len(columns) - rank


def solution_family_member(v: BogoliubovOp, coeffs, assoc: Associate = None) -> WickHamiltonian:
    """H = Lambda_V + correction(h12) with h12 = conj(X) A X*, A antisymmetric from ``coeffs``.

    ``coeffs`` lists the upper-triangle entries of the m x m antisymmetric A.
    """
    assoc = associate(v) if assoc is None else assoc
    x, y = family_subspaces(v)
    m = x.shape[1]
    a = np.zeros((m, m), complex)
    for c, (i, j) in zip(coeffs, itertools.combinations(range(m), 2)):
        a[i, j], a[j, i] = c, -c
    h = np.conj(x) @ a @ x.conj().T
    _, v12, v21, _ = v.components
    h_op = from_matrix(h, "K2", "K1")
    lift = assoc.one_plus_l11 - h_op @ v21
    h21 = assoc.l21 + adjoint(v12) @ h_op @ v21
    n = max(assoc.size, h.shape[0], h21.window, h21.block.shape[0])
    h12 = _mode_matrix(assoc.l12, n) + _mode_matrix(from_matrix(h, "K2", "K1"), n)
    return WickHamiltonian(lift.trimmed(1e-15), h12, _mode_matrix(h21, n))


# --------------------------------------------------------------- implementers
def creation_space_basis(v: BogoliubovOp, h12=None):
    """Orthonormal basis (e-coordinates) of ker V* intersected with ran(P1 - H12*).

    ``h12`` defaults to Lambda12 of the associate.  A vector k lies in
    ran(P1 - H12*) iff P2 k = -H12* P1 k; the intersection is the null space
    of that linear condition on an orthonormal basis of ker V*.
    """
    if h12 is None:
        h12 = associate(v).l12_matrix
    q = cokernel_basis(v.op).vectors
    if q.shape[1] == 0:
        return q
    q1, q2 = _split_cols(q)
    n = max(q1.shape[0], h12.shape[0])
    q1, q2 = _pad_rows(q1, n), _pad_rows(q2, n)
    cc = np.zeros((n, n), complex)
    cc[: h12.shape[0], : h12.shape[1]] = h12
    coeffs = null_space(q2 + cc.conj().T @ q1, rtol=0.0, atol=1e-9)
    return q @ coeffs


def _perm_sign(seq):
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class ImplementerSet:
    """The 2^m implementing isometries of a Bogoliubov operator V.

    Parameters
    ----------
    v : BogoliubovOp
    hamiltonian : WickHamiltonian, optional
        Defaults to the associate Lambda_V; any member of the solution family
        may be used instead.
    kernel_vectors : array, optional
        Orthonormal basis of ker V11 (columns, f-coordinates) to use for e_r.
    k_vectors : array, optional
        Orthonormal basis (columns, e-coordinates) of
        ker V* intersected with ran(P1 - H12*) to use for k_j.
    """

    def __init__(self, v: BogoliubovOp, hamiltonian: WickHamiltonian = None, kernel_vectors=None, k_vectors=None):
        self.v = v
        if hamiltonian is None:
            self.assoc = associate(v)
            hamiltonian = self.assoc.hamiltonian()
        else:
            self.assoc = None
        self.hamiltonian = hamiltonian
        self.m = v.index // 2
        self.norm_const = 1.0 / vacuum_norm(hamiltonian)

        v11, v12, _, _ = v.components
        if kernel_vectors is None:
            kernel_vectors = kernel_basis(v11).vectors
        self.kernel_vectors = np.asarray(kernel_vectors, dtype=complex)
        self.L = self.kernel_vectors.shape[1]
        # A_{V,r} creates V12 Gamma e_r
        self.created_vectors = _apply_cols(v12, np.conj(self.kernel_vectors))

        if k_vectors is None:
            k_vectors = self._k_basis()
        self.k_vectors = np.asarray(k_vectors, dtype=complex)
        if self.k_vectors.shape[1] != self.m:
            raise ArithmeticError(
                f"ker V* intersected with ran(P1 - H12*) has dimension {self.k_vectors.shape[1]}, expected {self.m}"
            )

    def _k_basis(self):
        return creation_space_basis(self.v, self.hamiltonian.h12)

    def __len__(self):
        return 2**self.m

    @property
    def multi_indices(self):
        return multi_indices(self.m)

    # ---------------------------------------------------------------- Psi_0
    def psi_hat_apply(self, v: FockVector) -> FockVector:
        """Normalized Wick exponential det(P1 + H12 H12*)^(-1/4) :exp(b(H)/2): v."""
        return self.norm_const * wick_exp(self.hamiltonian, v)

    def _subsets(self):
        for s in range(self.L + 1):
            for subset in itertools.combinations(range(self.L), s):
                rest = [r for r in range(self.L) if r not in subset]
                sign = (-1) ** s * _perm_sign(list(subset) + rest)
                yield sign, subset, rest

    def psi0_apply(self, v: FockVector) -> FockVector:
        """Psi_0(V) v: signed sum over subsets of the kernel basis of V11."""
        terms, signs = [], []
        for sign, subset, rest in self._subsets():
            w = v
            for r in reversed(rest):
                w = annihilate(self.kernel_vectors[:, r], parity(w))
            w = wick_exp(self.hamiltonian, w)
            for r in reversed(subset):
                w = create(self.created_vectors[:, r], parity(w))
            terms.append(w)
            signs.append(sign)
        return self.norm_const * linear_combination(terms, signs)

    def psi0_adjoint_apply(self, v: FockVector) -> FockVector:
        """Psi_0(V)* v, built from the adjoints of the individual factors."""
        terms, signs = [], []
        for sign, subset, rest in self._subsets():
            w = v
            for r in subset:
                w = parity(annihilate(self.created_vectors[:, r], w))
            w = wick_exp_adjoint(self.hamiltonian, w)
            for r in rest:
                w = parity(create(self.kernel_vectors[:, r], w))
            terms.append(w)
            signs.append(sign)
        return self.norm_const * linear_combination(terms, signs)

    # -------------------------------------------------------------- Psi_beta
    def psi_j(self, j, v: FockVector) -> FockVector:
        return psi(self.k_vectors[:, j], v)

    def psi_j_adjoint(self, j, v: FockVector) -> FockVector:
        return psi_adjoint(self.k_vectors[:, j], v)

    def psi_beta_apply(self, beta, v: FockVector) -> FockVector:
        """Psi_beta(V) v = psi(k_beta1) ... psi(k_betar) Psi_0(V) v."""
        w = self.psi0_apply(v)
        for j in reversed(beta):
            w = self.psi_j(j, w)
        return w

    def psi_beta_adjoint_apply(self, beta, v: FockVector) -> FockVector:
        """Psi_beta(V)* v = Psi_0(V)* psi(k_betar)* ... psi(k_beta1)* v."""
        w = v
        for j in beta:
            w = self.psi_j_adjoint(j, w)
        return self.psi0_adjoint_apply(w)

    def completeness_apply(self, v: FockVector) -> FockVector:
        """sum_beta Psi_beta Psi_beta* v (equals v)."""
        return linear_combination(
            [self.psi_beta_apply(b, self.psi_beta_adjoint_apply(b, v)) for b in self.multi_indices],
            [1.0] * len(self),
        )

    # ------------------------------------------------ window adjoint (oracle)
    def adjoint_window(self, v: FockVector):
        """Modes that can occur in a state e with <Psi_beta e, v> != 0.

        For modes j at or beyond the f-window C1 of V one has
        Psi_beta a+_j = a+_{j+m} Psi_beta, so such a mode can only occur if
        j + m <= max mode of v.  The returned bound is exclusive.
        """
        c1 = self.v.op.window // 2
        return max(c1, v.mode_bound() + 1 - self.m)

    def psi_beta_adjoint_by_window(self, beta, v: FockVector, max_modes=14, shell_tol=1e-12):
        """Psi_beta* v assembled from <Psi_beta e, v> over all states e in the provable window.

        The shell of states whose highest mode equals the bound must contribute
        nothing; if it does, the window is enlarged once and the check repeated
        before giving up.  Returns (vector, shell residual).
        """
        bound = self.adjoint_window(v)
        for _ in range(2):
            if bound + 1 > max_modes:
                raise OverflowError(f"adjoint window of {bound} modes exceeds the limit {max_modes}")
            keys, amps = [], []
            for key in range(2**bound):
                e = FockVector([key], [1.0], merged=True)
                amp = self.psi_beta_apply(beta, e).inner(v)
                if amp != 0:
                    keys.append(key)
                    amps.append(amp)
            shell = 0.0
            for key in range(2**bound):
                e = FockVector([key | (1 << bound)], [1.0], merged=True)
                shell = max(shell, abs(self.psi_beta_apply(beta, e).inner(v)))
            if shell <= shell_tol:
                return FockVector(np.array(keys, dtype=np.uint64), np.array(amps, dtype=complex)), shell
            bound += 1
        raise ArithmeticError(f"adjoint window shell not empty (residual {shell:.3e})")


def implementer_family(v: BogoliubovOp, **kwargs) -> ImplementerSet:
    return ImplementerSet(v, **kwargs)


def psi_hat_apply(v: BogoliubovOp, vec: FockVector) -> FockVector:
    return ImplementerSet(v).psi_hat_apply(vec)


def psi0_apply(v: BogoliubovOp, vec: FockVector) -> FockVector:
    return ImplementerSet(v).psi0_apply(vec)


def psi_beta_apply(iset: ImplementerSet, beta, vec: FockVector) -> FockVector:
    return iset.psi_beta_apply(beta, vec)


def psi_beta_adjoint_apply(iset: ImplementerSet, beta, vec: FockVector) -> FockVector:
    return iset.psi_beta_adjoint_apply(beta, vec)


# ------------------------------------------------------------ cyclic vectors
def transformed_field(v: BogoliubovOp, k, vec: FockVector) -> FockVector:
    """pi(rho_V(B(k))) vec = pi(B(V k)) vec."""
    return field(v.apply(k), vec)


def transformed_monomial(v: BogoliubovOp, ks, vec: FockVector) -> FockVector:
    """pi(rho_V(B(k_1) ... B(k_r))) vec."""
    for k in reversed(ks):
        vec = transformed_field(v, k, vec)
    return vec


def cyclic_vectors(v: BogoliubovOp):
    """phi_beta = A_beta* Omega with A(f) = a(f) Theta over a basis f_j of ker(P1 V V* P1)."""
    from .quasifree import n_v_basis

    basis = n_v_basis(v)
    n = basis.shape[1]
    out = []
    for beta in multi_indices(n):
        w = FockVector.vacuum()
        for j in beta:
            w = parity(create(basis[:, j], w))
        out.append((beta, w))
    return out


def decomposition_witness(v: BogoliubovOp, rng=None, n_monomials=30, max_degree=4):
    """Check the cyclic decomposition of pi_P1 o rho_V against quasi-free moments.

    Returns a dict with the number of cyclic vectors, the worst deviation of
    <phi_beta, pi(rho_V(A)) phi_beta> from omega_{S_V}(A), and the worst
    overlap between the orbits of different phi_beta.
    """
    from .quasifree import induced_state, npoint

    rng = np.random.default_rng(0) if rng is None else rng
    s_v = induced_state(v)
    phis = cyclic_vectors(v)
    support = max(v.op.window + v.index, 4)
    worst_moment = 0.0
    worst_overlap = 0.0
    for _ in range(n_monomials):
        degree = int(rng.integers(0, max_degree + 1))
        ks = [rng.normal(size=support) + 1j * rng.normal(size=support) for _ in range(degree)]
        expected = npoint(s_v, ks)
        images = [(beta, transformed_monomial(v, ks, phi)) for beta, phi in phis]
        for (beta, phi), (_, img) in zip(phis, images):
            worst_moment = max(worst_moment, abs(phi.inner(img) - expected))
        other = [rng.normal(size=support) + 1j * rng.normal(size=support) for _ in range(int(rng.integers(0, 3)))]
        for (b1, phi1), (b2, phi2) in itertools.combinations(phis, 2):
            x = transformed_monomial(v, ks, phi1)
            y = transformed_monomial(v, other, phi2)
            worst_overlap = max(worst_overlap, abs(x.inner(y)))
    return {"n_cyclic": len(phis), "moment_residual": worst_moment, "orbit_overlap": worst_overlap}


def occupation(vec: FockVector):
    """Readable {modes: amplitude} view."""
    return {key_to_modes(k): a for k, a in zip(vec.keys, vec.amps)}


# ---------------------------------------------------------------- checks
def intertwining_residual(iset: ImplementerSet, beta, k, vec: FockVector) -> float:
    """|| Psi_beta pi(B(k)) v - pi(B(V k)) Psi_beta v ||."""
    lhs = iset.psi_beta_apply(beta, field(k, vec))
    rhs = field(iset.v.apply(k), iset.psi_beta_apply(beta, vec))
    return lhs.distance(rhs)


def cuntz_residuals(iset: ImplementerSet, vectors):
    """(orthogonality, completeness) residuals of the Cuntz relations on test vectors."""
    orth = 0.0
    compl = 0.0
    betas = iset.multi_indices
    for vec in vectors:
        images = {b: iset.psi_beta_apply(b, vec) for b in betas}
        for b in betas:
            for d in betas:
                x = iset.psi_beta_adjoint_apply(b, images[d])
                orth = max(orth, x.distance(vec) if b == d else x.norm())
        compl = max(compl, iset.completeness_apply(vec).distance(vec))
    return orth, compl


def psi_relation_residuals(iset: ImplementerSet, vectors):
    """psi_j as creation operators over the vacuum Psi_0.

    Returns the worst residual of {psi_i, psi_j*} = delta_ij, {psi_i, psi_j} = 0
    and psi_j* Psi_0 = 0 on the test vectors.
    """
    car = 0.0
    vac = 0.0
    for vec in vectors:
        psi0 = iset.psi0_apply(vec)
        for i in range(iset.m):
            vac = max(vac, iset.psi_j_adjoint(i, psi0).norm())
            for j in range(iset.m):
                anti = iset.psi_j(i, iset.psi_j_adjoint(j, vec)) + iset.psi_j_adjoint(j, iset.psi_j(i, vec))
                car = max(car, anti.distance(vec if i == j else FockVector.zero()))
                both = iset.psi_j(i, iset.psi_j(j, vec)) + iset.psi_j(j, iset.psi_j(i, vec))
                car = max(car, both.norm())
    return car, vac


def family_coefficients(target: ImplementerSet, reference: ImplementerSet):
    """c[beta, delta] = <Psi_delta Omega, Psi'_beta Omega> between two families of the same V."""
    omega = FockVector.vacuum()
    ref = [reference.psi_beta_apply(d, omega) for d in reference.multi_indices]
    out = np.zeros((len(target), len(reference)), complex)
    for i, b in enumerate(target.multi_indices):
        img = target.psi_beta_apply(b, omega)
        for j, r in enumerate(ref):
            out[i, j] = r.inner(img)
    return out


def family_span_residual(target: ImplementerSet, reference: ImplementerSet, vectors) -> float:
    """max || Psi'_beta v - sum_delta c[beta, delta] Psi_delta v || over test vectors."""
    coef = family_coefficients(target, reference)
    worst = 0.0
    for vec in vectors:
        ref = [reference.psi_beta_apply(d, vec) for d in reference.multi_indices]
        for i, b in enumerate(target.multi_indices):
            expected = linear_combination(ref, coef[i])
            worst = max(worst, target.psi_beta_apply(b, vec).distance(expected))
    return worst


def associate_residuals(assoc: Associate) -> dict:
    """Defining properties of the associate as residuals.

    ``antisymmetry``: Lambda12 and Lambda21 antisymmetric;
    ``lift_symmetry``: P1 + Lambda11 equals Gamma-conj(P2 - Lambda22)*;
    ``range_equation``: Lambda12 V22 - V12 P_{ran V22*};
    ``kills_kernel_image``: Lambda12 on V21(ker V11).
    """
    v = assoc.v
    v11, v12, v21, v22 = v.components
    l12 = assoc.l12_matrix
    l21 = assoc.l21_matrix
    out = {
        "antisymmetry": max(float(np.max(np.abs(l12 + l12.T), initial=0.0)), float(np.max(np.abs(l21 + l21.T), initial=0.0))),
        "lift_symmetry": assoc.one_plus_l11.max_abs_diff(adjoint(assoc.one_minus_l22.gamma_conj())),
    }
    ran_proj = identity("K2") - kernel_basis(v22).projector()
    eq = assoc.l12 @ v22 - v12 @ ran_proj
    out["range_equation"] = float(np.max(np.abs(eq.block), initial=0.0)) if eq.tail_is_zero else float("inf")
    ker = kernel_basis(v11).vectors
    if ker.shape[1]:
        img = _apply_cols(v21, ker)
        out["kills_kernel_image"] = float(np.max(np.abs(_apply_cols(assoc.l12, img)), initial=0.0))
    else:
        out["kills_kernel_image"] = 0.0
    return out
