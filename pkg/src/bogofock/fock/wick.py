"""Wick-ordered exponentials of antisymmetric bilinear Hamiltonians.

A Hamiltonian H on K with H = -Gamma H* Gamma is described by

* ``lift``: the operator 1 + H11 on K1 (finite type; for shifted Hamiltonians
  H11 alone is not of finite type, 1 + H11 is),
* ``h12``: matrix c[p, q] = <f_p, H Gamma f_q>, antisymmetric,
* ``h21``: matrix d[p, q] = <Gamma f_p, H f_q>, antisymmetric.

H22 is determined by H11 through antisymmetry.  The normal-ordered
exponential factorizes as

    :exp(b(H)/2): = exp(PairCreate(h12)/2) Gamma(1 + H11) exp(PairAnnihilate(h21)/2)

with PairCreate(c) = sum c[p,q] a+_p a+_q and PairAnnihilate(d) = sum d[p,q] a_p a_q.
Both pair series terminate on finite vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..selfdual import ATOL, FiniteTypeOp, adjoint, from_matrix, identity
from .ops import annihilate, create, exp_pairs, lift
from .vector import FockVector


def _square(mat, n):
    out = np.zeros((n, n), complex)
    mat = np.asarray(mat, dtype=complex)
    out[: mat.shape[0], : mat.shape[1]] = mat
    return out


def antisymmetry_residual(mat) -> float:
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return 0.0
    return float(np.max(np.abs(mat + mat.T)))


@dataclass(frozen=True)
class WickHamiltonian:
    lift: FiniteTypeOp
    h12: np.ndarray
    h21: np.ndarray

    def __post_init__(self):
        if (self.lift.dom, self.lift.cod) != ("K1", "K1"):
            raise ValueError("1 + H11 must act on K1")
        h12 = np.atleast_2d(np.asarray(self.h12, dtype=complex))
        h21 = np.atleast_2d(np.asarray(self.h21, dtype=complex))
        n = max(h12.shape + h21.shape)
        h12, h21 = _square(h12, n), _square(h21, n)
        for name, mat in (("H12", h12), ("H21", h21)):
            scale = max(1.0, float(np.max(np.abs(mat), initial=0.0)))
            res = antisymmetry_residual(mat)
            if res > ATOL * scale:
                raise ValueError(f"{name} is not antisymmetric (residual {res:.3e})")
        h12 = (h12 - h12.T) / 2
        h21 = (h21 - h21.T) / 2
        h12.setflags(write=False)
        h21.setflags(write=False)
        object.__setattr__(self, "h12", h12)
        object.__setattr__(self, "h21", h21)

    @classmethod
    def zero(cls):
        return cls(identity("K1"), np.zeros((0, 0)), np.zeros((0, 0)))

    @classmethod
    def from_parts(cls, h11, h12, h21):
        """Build from a finite matrix (or zero-tail operator) H11 on K1."""
        if not isinstance(h11, FiniteTypeOp):
            h11 = from_matrix(h11, "K1")
        return cls(identity("K1") + h11, h12, h21)

    @property
    def n_modes(self) -> int:
        return self.h12.shape[0]

    @property
    def h11(self) -> FiniteTypeOp:
        """H11 = lift - 1 (only available when the lift has an unshifted identity tail)."""
        return self.lift - identity("K1")

    def adjoint_parts(self):
        """Factors of the adjoint, in application order."""
        return self.h12.conj().T, adjoint(self.lift), self.h21.conj().T


def wick_exp(h: WickHamiltonian, v: FockVector) -> FockVector:
    """:exp(b(H)/2): v via the three-stage factorization."""
    w = exp_pairs(h.h21, v, create_pairs=False)
    w = lift(h.lift, w)
    return exp_pairs(h.h12, w, create_pairs=True)


def wick_exp_adjoint(h: WickHamiltonian, v: FockVector) -> FockVector:
    """(:exp(b(H)/2):)* v, using the adjoint of each factor."""
    h12_adj, lift_adj, h21_adj = h.adjoint_parts()
    w = exp_pairs(h12_adj, v, create_pairs=False)
    w = lift(lift_adj, w)
    return exp_pairs(h21_adj, w, create_pairs=True)


def vacuum_norm(h: WickHamiltonian) -> float:
    """det(1 + H12 H12*)^(1/4), the norm of :exp(b(H)/2): Omega."""
    c = h.h12
    if c.size == 0:
        return 1.0
    det = np.linalg.det(np.eye(c.shape[0]) + c @ c.conj().T)
    return float(det.real ** 0.25)


def relation_residuals(h: WickHamiltonian, f, g, v: FockVector):
    """Residuals of the commutation relations of :exp(b(H)/2): with a(f)* and a(g).

    With M = 1 + H11 (the lift) the relations read

        E a(f)* = a(M f)* E + E a(Gamma H21 f)
        E a(M* g) = a(g) E + a(H12 Gamma g)* E

    which are the commutator relations [E, a(f)*] = a(H11 f)* E + E a(Gamma H21 f)
    and [E, a(g)] = a(H12 Gamma g)* E + E a(Gamma-conj(H22) g) rewritten so
    that only the finite-type lift enters.
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    n = h.n_modes
    c = h.h12
    d = h.h21
    fp = np.zeros(max(n, len(f)), complex)
    fp[: len(f)] = f
    gp = np.zeros(max(n, len(g)), complex)
    gp[: len(g)] = g
    d_f = d @ fp[:n] if n else np.zeros(0, complex)
    c_g = c @ np.conj(gp[:n]) if n else np.zeros(0, complex)

    lhs1 = wick_exp(h, create(f, v))
    rhs1 = create(h.lift.apply(f), wick_exp(h, v)) + wick_exp(h, annihilate(np.conj(d_f), v))
    lhs2 = wick_exp(h, annihilate(adjoint(h.lift).apply(g), v))
    rhs2 = annihilate(g, wick_exp(h, v)) + create(c_g, wick_exp(h, v))
    return lhs1.distance(rhs1), lhs2.distance(rhs2)


def commutator_residuals(h: WickHamiltonian, f, g, v: FockVector):
    """The same relations in literal commutator form; needs an unshifted lift (finite H11).

    [E, a(g)] = a(H12 Gamma g)* E - E a(H11* g) uses Gamma-conj(H22) = -H11*.
    """
    if h.lift.shift != 0:
        raise ValueError("commutator form needs a finite H11")
    h11 = h.h11
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    n = h.n_modes
    fp = np.zeros(max(n, len(f)), complex)
    fp[: len(f)] = f
    gp = np.zeros(max(n, len(g)), complex)
    gp[: len(g)] = g
    d_f = h.h21 @ fp[:n] if n else np.zeros(0, complex)
    c_g = h.h12 @ np.conj(gp[:n]) if n else np.zeros(0, complex)
    ev = wick_exp(h, v)
    comm1 = wick_exp(h, create(f, v)) - create(f, ev)
    rhs1 = create(h11.apply(f), ev) + wick_exp(h, annihilate(np.conj(d_f), v))
    comm2 = wick_exp(h, annihilate(g, v)) - annihilate(g, ev)
    rhs2 = create(c_g, ev) - wick_exp(h, annihilate(adjoint(h11).apply(g), v))
    return comm1.distance(rhs1), comm2.distance(rhs2)
