"""Quasi-free states, the induced two-point operators S_V = V* P1 V and their spectra."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .selfdual import (
    ATOL,
    MODES,
    BogoliubovOp,
    FiniteTypeOp,
    adjoint,
    compose,
    cokernel_basis,
    gamma_conj,
    hs_norm,
    identity,
    null_space,
    orthonormal_range,
    p1_op,
)


@dataclass(frozen=True)
class TwoPointOperator:
    """Operator S on K with 0 <= S <= 1 and Gamma S Gamma = 1 - S."""

    op: FiniteTypeOp

    def __post_init__(self):
        if self.op.dom != "K" or self.op.shift != 0:
            raise ValueError("a two-point operator acts on K without shift")
        res = gamma_residual(self.op)
        if res > 1e-10:
            raise ValueError(f"Gamma S Gamma = 1 - S violated (residual {res:.3e})")

    @classmethod
    def fock(cls):
        """The basis projection P1 (Fock state)."""
        return cls(p1_op())

    def matrix(self, n):
        return self.op.matrix(n, n)

    def spectrum_bounds(self):
        """Smallest and largest eigenvalue on the window (the tail has spectrum {0, 1})."""
        n = self.op.window + 2
        m = self.op.dense(n)
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        return float(min(w.min(), 0.0)), float(max(w.max(), 1.0))


def gamma_residual(s: FiniteTypeOp) -> float:
    """max entry of Gamma S Gamma + S - 1."""
    return (gamma_conj(s) + s).max_abs_diff(identity("K"))


def _as_two_point(s):
    return s if isinstance(s, TwoPointOperator) else TwoPointOperator(s)


def two_point_matrix(s, ks):
    """G[a, b] = omega_S(B(k_a) B(k_b)) = <Gamma k_a, S k_b>."""
    s = _as_two_point(s)
    n = max([len(k) for k in ks] + [s.op.window, 2])
    n += n % 2
    kmat = np.zeros((n, len(ks)), complex)
    for j, k in enumerate(ks):
        kmat[: len(k), j] = k
    smat = s.matrix(n)
    return kmat.T @ smat @ kmat


def npoint(s, ks) -> complex:
    """omega_S(B(k_1) ... B(k_r)) by recursive pairing expansion (0 for odd r)."""
    ks = [np.asarray(k, dtype=complex) for k in ks]
    if len(ks) % 2:
        return 0.0j
    if not ks:
        return 1.0 + 0.0j
    g = two_point_matrix(s, ks)

    @lru_cache(maxsize=None)
    def pf(idx):
        if not idx:
            return 1.0 + 0.0j
        first, rest = idx[0], idx[1:]
        total = 0.0j
        for pos, j in enumerate(rest):
            if g[first, j] == 0:
                continue
            sign = -1.0 if pos % 2 else 1.0
            total += sign * g[first, j] * pf(rest[:pos] + rest[pos + 1 :])
        return total

    return complex(pf(tuple(range(len(ks)))))


def induced_state(v: BogoliubovOp, s=None) -> TwoPointOperator:
    """V* S V; with the default S = P1 this is S_V."""
    s = TwoPointOperator.fock() if s is None else _as_two_point(s)
    return TwoPointOperator(compose(adjoint(v.op), compose(s.op, v.op)).trimmed(1e-15))


def n_v_basis(v: BogoliubovOp):
    """Orthonormal basis (f-coordinates) of ker(P1 V V* P1) = K1 intersected with ker V*."""
    q = cokernel_basis(v.op).vectors
    if q.shape[1] == 0:
        return np.zeros((0, 0), complex)
    parts1 = np.array([MODES.split(q[:, j])[0] for j in range(q.shape[1])]).T
    parts2 = np.array([MODES.split(q[:, j])[1] for j in range(q.shape[1])]).T
    coeffs = null_space(parts2, rtol=0.0, atol=1e-9)
    if coeffs.shape[1] == 0:
        return np.zeros((parts1.shape[0], 0), complex)
    return orthonormal_range(parts1 @ coeffs)


def n_v(v: BogoliubovOp) -> int:
    """N_V = dim ker v with v = P1 V V* P1 on K1."""
    return n_v_basis(v).shape[1]


def p1_commutator_norm(v: BogoliubovOp) -> float:
    """|| [P1, V V*] || (finite rank, computed exactly)."""
    vv = compose(v.op, adjoint(v.op))
    p1 = p1_op()
    comm = compose(p1, vv) - compose(vv, p1)
    if not comm.tail_is_zero:
        raise AssertionError("commutator with P1 must have finite rank")
    return float(np.linalg.norm(comm.block, 2)) if comm.block.size else 0.0


def purity_test(v: BogoliubovOp, tol=1e-10) -> bool:
    """omega_P1 o rho_V is pure iff [P1, V V*] = 0 iff S_V is a projection."""
    return p1_commutator_norm(v) <= tol


def idempotence_residual(s) -> float:
    s = _as_two_point(s).op
    return (compose(s, s)).max_abs_diff(s)


def equivalence_test(v: BogoliubovOp, w: BogoliubovOp):
    """Quasi-equivalence of omega_{S_V} and omega_{S_W}.

    Equal indices are required; the Hilbert-Schmidt condition on S_V - S_W
    holds automatically for finite-type operators and its value is reported.
    """
    diff = induced_state(v).op - induced_state(w).op
    hs = hs_norm(diff) if diff.tail_is_zero else float("inf")
    return v.index == w.index, hs


def shale_stinespring_norm(v: BogoliubovOp) -> float:
    """|| P1 V P2 ||_2 = || V12 ||_2, always finite here."""
    return hs_norm(v.components[1])


@dataclass
class SpectralReport:
    """Spectral structure of a two-point operator S with S(1 - S) of finite rank.

    ``pairs`` holds (theta, E, Gamma E Gamma) with E the orthonormal columns
    (e-coordinates) of the theta-eigenspace; theta belongs to the member of
    the pair with the larger weight in K1.  ``half`` spans the eigenvalue-1/2
    space and ``nontrivial_rank`` = rank S(1 - S) equals the Gamma-codimension
    of the partial basis projection S E_V.
    """

    pairs: list = field(default_factory=list)
    half: np.ndarray = None
    nontrivial_rank: int = 0
    window: int = 0
    pairing_residual: float = 0.0

    @property
    def thetas(self):
        return [p[0] for p in self.pairs]

    def e_v_projector(self, n):
        """Matrix of E_V = projection onto ker S(1 - S), on the first n basis vectors."""
        cols = [p[1] for p in self.pairs] + [p[2] for p in self.pairs]
        if self.half is not None and self.half.shape[1]:
            cols.append(self.half)
        out = np.eye(n, dtype=complex)
        for c in cols:
            cc = np.zeros((n, c.shape[1]), complex)
            cc[: c.shape[0]] = c
            out -= cc @ cc.conj().T
        return out


def spectral_pairs(s, tol=1e-9) -> SpectralReport:
    """Eigen-decompose S on the finite-rank range of S(1 - S)."""
    s = _as_two_point(s).op
    r = s - compose(s, s)
    if not r.tail_is_zero:
        raise ValueError("S(1 - S) must have finite rank")
    n = 2 * (s.window + abs(s.shift)) + 8
    n = max(n, r.window + 2, r.block.shape[0] + 2)
    n += n % 2
    rmat = r.matrix(n, n)
    # nontrivial content must lie strictly inside the window
    if np.max(np.abs(rmat[n - 2 :, :]), initial=0.0) > ATOL or np.max(np.abs(rmat[:, n - 2 :]), initial=0.0) > ATOL:
        raise ValueError("spectral window too small")
    rmat = (rmat + rmat.conj().T) / 2
    w, q = np.linalg.eigh(rmat)
    q = q[:, w > tol]
    report = SpectralReport(window=n, nontrivial_rank=q.shape[1])
    if q.shape[1] == 0:
        report.half = np.zeros((n, 0), complex)
        return report
    smat = s.matrix(n, n)
    m = q.conj().T @ smat @ q
    theta, y = np.linalg.eigh((m + m.conj().T) / 2)
    vecs = q @ y
    half = np.abs(theta - 0.5) <= 1e-7
    report.half = orthonormal_range(vecs[:, half]) if np.any(half) else np.zeros((n, 0), complex)
    upper = np.flatnonzero(theta > 0.5 + 1e-7)
    lower = np.flatnonzero(theta < 0.5 - 1e-7)
    if len(upper) != len(lower):
        raise ArithmeticError("spectral pairing theta <-> 1 - theta violated")
    worst = 0.0
    # group eigenvalues above 1/2 into clusters
    groups = []
    for i in upper[::-1]:
        if groups and abs(theta[groups[-1][0]] - theta[i]) <= 1e-7:
            groups[-1].append(i)
        else:
            groups.append([i])
    for grp in groups:
        t_hi = float(np.mean(theta[grp]))
        partner = lower[np.abs(theta[lower] - (1 - t_hi)) <= 1e-7]
        if len(partner) != len(grp):
            raise ArithmeticError("spectral pairing theta <-> 1 - theta violated")
        worst = max(worst, float(np.max(np.abs(theta[partner] + t_hi - 1.0))))
        e_hi = orthonormal_range(vecs[:, grp])
        e_lo = orthonormal_range(vecs[:, partner])
        # K1-weight decides which member carries theta
        k1_weight = sum(np.linalg.norm(MODES.split(e_hi[:, j])[0]) ** 2 for j in range(e_hi.shape[1]))
        if k1_weight >= e_hi.shape[1] / 2 - 1e-12:
            report.pairs.append((t_hi, e_hi, e_lo))
        else:
            report.pairs.append((1.0 - t_hi, e_lo, e_hi))
    report.pairing_residual = worst
    return report


def eigenvalue_on(s, k) -> complex:
    """<k, S k> / <k, k> for a vector k (e-coordinates)."""
    k = np.asarray(k, dtype=complex)
    sk = _as_two_point(s).op.apply(k)
    kk = np.zeros(len(sk), complex)
    kk[: len(k)] = k
    return complex(np.vdot(kk, sk) / np.vdot(k, k))
