"""CAR operators, parity and field operators acting on sparse Fock vectors.

One-particle vectors of K1 are coefficient arrays in the f-basis, vectors of
K are coefficient arrays in the e-basis.  ``a(f)`` is antilinear in f and
``a(f)*`` is linear.
"""

from __future__ import annotations

import numpy as np

from ..selfdual import MODES, BogoliubovOp, FiniteTypeOp
from . import kernels
from .vector import FockVector


def _support(coefs, tol=0.0):
    coefs = np.asarray(coefs, dtype=complex).reshape(-1)
    idx = np.flatnonzero(np.abs(coefs) > tol)
    if len(idx) and idx[-1] >= kernels.MAX_MODES:
        raise ValueError(f"mode {idx[-1]} exceeds the {kernels.MAX_MODES}-mode limit of the Fock engine")
    return idx, coefs[idx]


def _one_body(v: FockVector, modes, coefs, create) -> FockVector:
    if len(modes) == 0 or v.is_zero:
        return FockVector()
    k, a = kernels.one_body(v.keys, v.amps, modes, coefs, create)
    return FockVector(k, a, merged=True)


def create(f, v: FockVector) -> FockVector:
    """a(f)* v = sum_p f_p a+_p v."""
    modes, coefs = _support(f)
    return _one_body(v, modes, coefs, True)


def annihilate(f, v: FockVector) -> FockVector:
    """a(f) v = sum_p conj(f_p) a_p v."""
    modes, coefs = _support(f)
    return _one_body(v, modes, np.conj(coefs), False)


def creation_annihilation(c, d, v: FockVector) -> FockVector:
    """sum_p c_p a+_p v + sum_p d_p a_p v (both linear in the coefficients)."""
    out = FockVector()
    mc, cc = _support(c)
    md, cd = _support(d)
    parts = []
    if len(mc):
        parts.append(_one_body(v, mc, cc, True))
    if len(md):
        parts.append(_one_body(v, md, cd, False))
    for p in parts:
        out = out + p
    return out


def parity(v: FockVector) -> FockVector:
    """Theta v with Theta = (-1)^(particle number)."""
    signs = 1 - 2 * (v.particle_numbers() & 1)
    return FockVector(v.keys, v.amps * signs, merged=True)


def field(k, v: FockVector) -> FockVector:
    """pi(B(k)) v = a(P1 k)* v + a(P1 Gamma k) v for k in e-coordinates."""
    k1, k2 = MODES.split(k)
    return creation_annihilation(k1, k2, v)


def psi(k, v: FockVector) -> FockVector:
    """psi(k) = pi(B(k)) Theta."""
    return field(k, parity(v))


def psi_adjoint(k, v: FockVector) -> FockVector:
    """psi(k)* = Theta pi(B(Gamma k))."""
    return parity(field(MODES.gamma(k), v))


def _mode_image(op: FiniteTypeOp, x):
    return op.apply(x) if len(x) else np.zeros(0, complex)


def transformed_annihilate(v_op: BogoliubovOp, f, v: FockVector) -> FockVector:
    """a_V(f) v = a(V11 f) v + a(V12 Gamma f)* v."""
    v11, v12, _, _ = v_op.components
    f = np.asarray(f, dtype=complex)
    g = _mode_image(v11, f)
    h = _mode_image(v12, np.conj(f))
    return creation_annihilation(h, np.conj(g), v)


def transformed_create(v_op: BogoliubovOp, f, v: FockVector) -> FockVector:
    """a_V(f)* v = a(V11 f)* v + a(V12 Gamma f) v."""
    v11, v12, _, _ = v_op.components
    f = np.asarray(f, dtype=complex)
    g = _mode_image(v11, f)
    h = _mode_image(v12, np.conj(f))
    return creation_annihilation(g, np.conj(h), v)


def _pair_entries(mat, tol=0.0):
    mat = np.asarray(mat, dtype=complex)
    ps, qs = np.nonzero(np.abs(mat) > tol)
    if len(ps) and max(ps.max(), qs.max()) >= kernels.MAX_MODES:
        raise ValueError("pair operator exceeds the mode limit of the Fock engine")
    return ps, qs, mat[ps, qs]


def pair_create(mat, v: FockVector) -> FockVector:
    """sum_{p,q} mat[p,q] a+_p a+_q v."""
    ps, qs, c = _pair_entries(mat)
    if len(ps) == 0 or v.is_zero:
        return FockVector()
    k, a = kernels.pair(v.keys, v.amps, ps, qs, c, True)
    return FockVector(k, a, merged=True)


def pair_annihilate(mat, v: FockVector) -> FockVector:
    """sum_{p,q} mat[p,q] a_p a_q v."""
    ps, qs, c = _pair_entries(mat)
    if len(ps) == 0 or v.is_zero:
        return FockVector()
    k, a = kernels.pair(v.keys, v.amps, ps, qs, c, False)
    return FockVector(k, a, merged=True)


def exp_pairs(mat, v: FockVector, create_pairs=True, scale=0.5) -> FockVector:
    """exp(scale * sum mat[p,q] c_p c_q) v; the series terminates on finite vectors."""
    step = pair_create if create_pairs else pair_annihilate
    mat = scale * np.asarray(mat, dtype=complex)
    total = v
    term = v
    order = 0
    while not term.is_zero:
        order += 1
        term = step(mat, term) / order
        total = total + term
    return total


def lift(op: FiniteTypeOp, v: FockVector) -> FockVector:
    """Gamma(M): a+_{p1}...a+_{pk} Omega -> a(M f_{p1})* ... a(M f_{pk})* Omega.

    ``op`` is an operator on K1 of finite type; the columns needed by the
    occupied modes of ``v`` are materialized exactly.
    """
    if op.dom != "K1" or op.cod != "K1":
        raise ValueError("lift needs an operator on K1")
    if v.is_zero:
        return FockVector()
    n = v.mode_bound() + 1
    colptr = [0]
    rowind = []
    vals = []
    for s in range(n):
        rows, cs = op.column(s)
        rowind.extend(rows.tolist())
        vals.extend(cs.tolist())
        colptr.append(len(rowind))
    if rowind and max(rowind) >= kernels.MAX_MODES:
        raise ValueError("lifted orbitals exceed the mode limit of the Fock engine")
    k, a = kernels.lift(v.keys, v.amps, colptr, rowind, vals)
    return FockVector(k, a, merged=True)
