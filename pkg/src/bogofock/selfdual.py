"""Exact finite-type operators on the selfdual one-particle space (K, Gamma).

Conventions
-----------
K has the real orthonormal basis e_0, e_1, ... and the conjugation Gamma is
entrywise complex conjugation in that basis.  The creation modes are

    f_n = (e_{2n} - i e_{2n+1}) / sqrt(2),   Gamma f_n = (e_{2n} + i e_{2n+1}) / sqrt(2),

so the basis projection P1 = (1 + iJ)/2 projects onto K1 = span{f_n} and
P2 = 1 - P1 onto K2 = span{Gamma f_n}.  Operators on K are stored in the
e-basis, operators on K1 in the f-basis and operators on K2 in the
(Gamma f)-basis.

An operator of finite type is a finite complex block acting on the first C
basis vectors plus a periodic tail: basis vector j >= C is mapped by a fixed
p x p pattern (p = 2 on K, p = 1 on K1 and K2) onto the indices shifted by t.
The block rows (< C + t) and the tail rows (>= C + t) never overlap, so every
operator is an orthogonal direct sum "block (+) tail".  This class is closed
under composition, adjoints, Gamma-conjugation and sums of operators with
equal tails, and all arithmetic on it is exact (no truncation).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

#: absolute tolerance for identity/orthonormality checks
ATOL = 1e-12
#: relative singular-value threshold for rank decisions
RANK_RTOL = 1e-9
#: singular values below this are treated as zero regardless of scale
RANK_ATOL = 1e-10
#: pattern entries below this are treated as exact zeros
PATTERN_EPS = 1e-14

SPACES = ("K", "K1", "K2")
PERIOD = {"K": 2, "K1": 1, "K2": 1}

SQRT2 = np.sqrt(2.0)
# columns are f_n and Gamma f_n written in the pair (e_{2n}, e_{2n+1})
PAIR_BASIS = np.array([[1.0, 1.0], [-1.0j, 1.0j]]) / SQRT2

P1_PATTERN = PAIR_BASIS @ np.diag([1.0, 0.0]) @ PAIR_BASIS.conj().T
P2_PATTERN = PAIR_BASIS @ np.diag([0.0, 1.0]) @ PAIR_BASIS.conj().T
J_PATTERN = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


class ModeConvention:
    """Coordinate maps between the e-basis of K and the mode basis (f, Gamma f)."""

    pair_basis = PAIR_BASIS
    p1_pattern = P1_PATTERN
    p2_pattern = P2_PATTERN
    j_pattern = J_PATTERN

    @staticmethod
    def split(k):
        """Return (k1, k2) with k1[n] = <f_n, k> and k2[n] = <Gamma f_n, k>."""
        k = _pad_even(np.asarray(k, dtype=complex))
        even, odd = k[0::2], k[1::2]
        return (even + 1j * odd) / SQRT2, (even - 1j * odd) / SQRT2

    @staticmethod
    def join(k1=None, k2=None):
        """Inverse of :meth:`split`: the e-coordinates of sum k1_n f_n + k2_n Gamma f_n."""
        k1 = np.zeros(0, complex) if k1 is None else np.asarray(k1, dtype=complex)
        k2 = np.zeros(0, complex) if k2 is None else np.asarray(k2, dtype=complex)
        n = max(len(k1), len(k2))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(k1)] = k1
        b[: len(k2)] = k2
        out = np.empty(2 * n, complex)
        out[0::2] = (a + b) / SQRT2
        out[1::2] = 1j * (b - a) / SQRT2
        return out

    @staticmethod
    def gamma(k):
        """Gamma on e-coordinates."""
        return np.conj(np.asarray(k, dtype=complex))

    @staticmethod
    def f_vector(n, length=None):
        """e-coordinates of f_n."""
        e = np.zeros(max(n + 1, length or 0), complex)
        e[n] = 1.0
        return ModeConvention.join(e, None)


MODES = ModeConvention()


def _pad_even(k):
    if len(k) % 2:
        return np.concatenate([k, [0.0]])
    return k


def _round_up(n, p):
    return -(-n // p) * p


def _pad_vector(x, n):
    out = np.zeros(n, complex)
    m = min(n, len(x))
    out[:m] = x[:m]
    if np.any(x[m:] != 0):
        raise ValueError("vector support exceeds the requested window")
    return out


def _clean_pattern(pattern, p):
    pattern = np.array(pattern, dtype=complex).reshape(p, p)
    pattern.real[np.abs(pattern.real) < PATTERN_EPS] = 0.0
    pattern.imag[np.abs(pattern.imag) < PATTERN_EPS] = 0.0
    return pattern


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class FiniteTypeOp:
    """Operator equal to a finite block plus a periodic shift/pattern tail.

    Parameters
    ----------
    block : array of shape (C + t, C)
        Images of the first C basis vectors of the domain.
    shift : int
        Tail shift t (a multiple of the period).
    pattern : (p, p) array, optional
        Tail pattern, identity by default.
    dom, cod : {"K", "K1", "K2"}
        Domain and codomain.  K must map to K; K1 and K2 may be mixed.
    """

    def __init__(self, block, shift=0, pattern=None, dom="K", cod=None):
        cod = dom if cod is None else cod
        if dom not in SPACES or cod not in SPACES:
            raise ValueError(f"unknown space tag {dom!r}/{cod!r}")
        if PERIOD[dom] != PERIOD[cod]:
            raise ValueError("operators between K and K1/K2 are not supported")
        p = PERIOD[dom]
        block = np.asarray(block, dtype=complex)
        if block.ndim != 2:
            raise ValueError("block must be a matrix")
        rows, cols = block.shape
        shift = int(shift)
        if cols % p or shift % p:
            raise ValueError(f"window and shift must be multiples of the period {p}")
        if rows != cols + shift:
            raise ValueError(f"block shape {block.shape} does not match window {cols} and shift {shift}")
        if pattern is None:
            pattern = np.eye(p)
        self.block = _frozen(block)
        self.shift = shift
        self.pattern = _frozen(_clean_pattern(pattern, p))
        self.dom = dom
        self.cod = cod

    # ----------------------------------------------------------------- basics
    @property
    def period(self) -> int:
        return PERIOD[self.dom]

    @property
    def window(self) -> int:
        return self.block.shape[1]

    @property
    def tail_is_zero(self) -> bool:
        return not np.any(self.pattern)

    def __repr__(self):
        return (
            f"FiniteTypeOp({self.dom}->{self.cod}, window={self.window}, "
            f"shift={self.shift}, pattern={self.pattern.tolist()})"
        )

    def _min_columns(self, n=0):
        """Smallest admissible window >= n."""
        return _round_up(max(n, self.window, -self.shift, 0), self.period)

    def dense(self, n):
        """The (n + t) x n matrix of the operator restricted to the first n columns.

        Columns beyond ``n`` never reach rows below ``n + t``, so this is the
        exact upper-left corner of the infinite matrix.
        """
        p = self.period
        if n < self.window or n % p or n + self.shift < 0:
            raise ValueError(f"window {n} too small or misaligned for {self!r}")
        out = np.zeros((n + self.shift, n), complex)
        out[: self.block.shape[0], : self.window] = self.block
        for start in range(self.window, n, p):
            out[start + self.shift : start + self.shift + p, start : start + p] = self.pattern
        return out

    def matrix(self, rows, cols):
        """Upper-left ``rows x cols`` corner of the infinite matrix."""
        n = self._min_columns(cols)
        d = self.dense(n)
        out = np.zeros((rows, cols), complex)
        r = min(rows, d.shape[0])
        out[:r, :] = d[:r, :cols]
        return out

    def with_window(self, n):
        """Same operator expressed with a larger window."""
        return FiniteTypeOp(self.dense(n), self.shift, self.pattern, self.dom, self.cod)

    def column(self, j):
        """Sparse image of basis vector j as (row indices, values)."""
        if j < self.window:
            col = self.block[:, j]
            rows = np.flatnonzero(col)
            return rows, col[rows]
        p = self.period
        start = (j // p) * p
        col = self.pattern[:, j - start]
        rows = np.flatnonzero(col)
        return rows + start + self.shift, col[rows]

    def apply(self, x):
        """Apply to a finite coefficient vector; returns a finite vector."""
        x = np.asarray(x, dtype=complex)
        n = self._min_columns(len(x))
        return self.dense(n) @ _pad_vector(x, n)

    # -------------------------------------------------------------- algebra
    def __matmul__(self, other):
        if not isinstance(other, FiniteTypeOp):
            return NotImplemented
        return compose(self, other)

    def __add__(self, other):
        if not isinstance(other, FiniteTypeOp):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, FiniteTypeOp):
            return NotImplemented
        return add(self, -other)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, scalar):
        if isinstance(scalar, FiniteTypeOp):
            return NotImplemented
        return FiniteTypeOp(self.block * scalar, self.shift, self.pattern * scalar, self.dom, self.cod)

    __rmul__ = __mul__

    @property
    def H(self):
        return adjoint(self)

    def gamma_conj(self):
        return gamma_conj(self)

    def max_abs_diff(self, other) -> float:
        """Max entry of |self - other|; ``inf`` if the tails differ."""
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise ValueError("space tags differ")
        try:
            diff = add(self, -other)
        except ValueError:
            return float("inf")
        if diff.tail_is_zero:
            return float(np.max(np.abs(diff.block), initial=0.0))
        return float(np.max(np.abs(diff.pattern)))

    def allclose(self, other, atol=ATOL) -> bool:
        return self.max_abs_diff(other) <= atol

    def trimmed(self, atol=0.0):
        """Shrink the window while trailing block columns coincide with the tail."""
        p = self.period
        d = self.block
        c = self.window
        while c >= p and c - p + self.shift >= 0:
            start = c - p
            expected = np.zeros((d.shape[0], p), complex)
            if self.shift + start + p <= d.shape[0]:
                expected[start + self.shift : start + self.shift + p, :] = self.pattern
            else:
                break
            if np.max(np.abs(d[:, start:c] - expected), initial=0.0) > atol:
                break
            # rows of the remaining columns must stay inside the shrunken block
            if np.max(np.abs(d[start + self.shift :, :start]), initial=0.0) > atol:
                break
            c = start
        if c == self.window:
            return self
        return FiniteTypeOp(d[: c + self.shift, :c], self.shift, self.pattern, self.dom, self.cod)

    # ------------------------------------------------------------ structure
    def tail_extension(self):
        """The pure tail: the pattern applied on every aligned index it can reach."""
        t = self.shift
        if t >= 0:
            return FiniteTypeOp(np.zeros((t, 0)), t, self.pattern, self.dom, self.cod)
        return FiniteTypeOp(np.zeros((0, -t)), t, self.pattern, self.dom, self.cod)

    def finite_rank_part(self):
        """Operator minus its tail extension (zero tail)."""
        return add(self, -self.tail_extension())

    def finite_matrix(self, n=None):
        """Square matrix of a zero-tail operator on the first n basis vectors."""
        if not self.tail_is_zero:
            raise ValueError("operator has a nonzero tail")
        size = max(self.window, self.block.shape[0]) if n is None else n
        return self.matrix(size, size)

    @cached_property
    def components(self):
        """(A11, A12, A21, A22) with A_mn = P_m A P_n in the mode bases."""
        return components(self)


# ---------------------------------------------------------------- constructors
def identity(space="K"):
    p = PERIOD[space]
    return FiniteTypeOp(np.zeros((0, 0)), 0, np.eye(p), space, space)


def zero(dom="K", cod=None):
    cod = dom if cod is None else cod
    p = PERIOD[dom]
    return FiniteTypeOp(np.zeros((0, 0)), 0, np.zeros((p, p)), dom, cod)


def shift_op(t, space="K"):
    """Pure shift by t basis steps (t may be negative: the adjoint shift)."""
    if t >= 0:
        return FiniteTypeOp(np.zeros((t, 0)), t, None, space, space)
    return FiniteTypeOp(np.zeros((0, -t)), t, None, space, space)


def pattern_op(pattern, space="K"):
    """Operator acting by the pattern on every aligned block."""
    return FiniteTypeOp(np.zeros((0, 0)), 0, pattern, space, space)


def p1_op():
    return pattern_op(P1_PATTERN)


def p2_op():
    return pattern_op(P2_PATTERN)


def from_matrix(mat, dom="K", cod=None):
    """Finite-rank operator given by a finite matrix (zero tail)."""
    cod = dom if cod is None else cod
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    p = PERIOD[dom]
    n = _round_up(max(mat.shape), p)
    block = np.zeros((n, n), complex)
    block[: mat.shape[0], : mat.shape[1]] = mat
    return FiniteTypeOp(block, 0, np.zeros((p, p)), dom, cod)


# ------------------------------------------------------------------ arithmetic
def _reshift(a, t):
    """Express a zero-tail operator with tail shift t."""
    if a.shift == t:
        return a
    if not a.tail_is_zero:
        raise ValueError("tails incompatible")
    p = a.period
    n = _round_up(max(a.window, a.block.shape[0] - t, -t, 0), p)
    block = np.zeros((n + t, n), complex)
    block[: a.block.shape[0], : a.window] = a.block
    return FiniteTypeOp(block, t, a.pattern, a.dom, a.cod)


def _aligned(ops, shift):
    """Blocks of several operators with a common shift and window."""
    ops = [_reshift(a, shift) for a in ops]
    p = ops[0].period
    n = _round_up(max([a.window for a in ops] + [-shift, 0]), p)
    return [a.dense(n) for a in ops], n


def add(a: FiniteTypeOp, b: FiniteTypeOp) -> FiniteTypeOp:
    """Sum of two operators whose tails share a shift (or one tail is zero)."""
    if (a.dom, a.cod) != (b.dom, b.cod):
        raise ValueError(f"cannot add {a.dom}->{a.cod} and {b.dom}->{b.cod}")
    if a.shift != b.shift:
        if a.tail_is_zero:
            a = _reshift(a, b.shift)
        elif b.tail_is_zero:
            b = _reshift(b, a.shift)
        else:
            raise ValueError(f"tails with shifts {a.shift} and {b.shift} cannot be added")
    (da, db), _ = _aligned([a, b], a.shift)
    return FiniteTypeOp(da + db, a.shift, a.pattern + b.pattern, a.dom, a.cod)


def compose(a: FiniteTypeOp, b: FiniteTypeOp) -> FiniteTypeOp:
    """Exact product a @ b; tail shifts add and patterns multiply."""
    if a.dom != b.cod:
        raise ValueError(f"cannot compose {a.dom}->{a.cod} after {b.dom}->{b.cod}")
    p = a.period
    n = _round_up(max(b.window, a.window - b.shift, -b.shift, 0), p)
    block = a.dense(n + b.shift) @ b.dense(n)
    return FiniteTypeOp(block, a.shift + b.shift, a.pattern @ b.pattern, b.dom, a.cod)


def adjoint(a: FiniteTypeOp) -> FiniteTypeOp:
    """Exact adjoint: block and pattern conjugate-transposed, shift negated."""
    return FiniteTypeOp(a.block.conj().T, -a.shift, a.pattern.conj().T, a.cod, a.dom)


_SWAP = {"K": "K", "K1": "K2", "K2": "K1"}


def gamma_conj(a: FiniteTypeOp) -> FiniteTypeOp:
    """Gamma A Gamma.  Entrywise conjugate; K1 and K2 tags are exchanged."""
    return FiniteTypeOp(a.block.conj(), a.shift, a.pattern.conj(), _SWAP[a.dom], _SWAP[a.cod])


def _pair_unitary(n):
    return np.kron(np.eye(n // 2), PAIR_BASIS)


def components(a: FiniteTypeOp):
    """Split an operator on K into (A11, A12, A21, A22), A_mn = P_m A P_n.

    A11 acts on K1, A12 maps K2 to K1, A21 maps K1 to K2 and A22 acts on K2.
    """
    if a.dom != "K":
        raise ValueError("components are defined for operators on K")
    rows, cols = a.block.shape
    inner = _pair_unitary(rows).conj().T @ a.block @ _pair_unitary(cols)
    pat = PAIR_BASIS.conj().T @ a.pattern @ PAIR_BASIS
    tags = ("K1", "K2")
    out = []
    for r in range(2):
        for c in range(2):
            out.append(FiniteTypeOp(inner[r::2, c::2], a.shift // 2, pat[r, c], tags[c], tags[r]))
    return tuple(out)


def from_components(a11, a12, a21, a22) -> FiniteTypeOp:
    """Assemble an operator on K from its four mode components."""
    parts = [a11, a12, a21, a22]
    tags = [("K1", "K1"), ("K2", "K1"), ("K1", "K2"), ("K2", "K2")]
    for op, (d, c) in zip(parts, tags):
        if (op.dom, op.cod) != (d, c):
            raise ValueError(f"component with tags {op.dom}->{op.cod}, expected {d}->{c}")
    shifts = {op.shift for op in parts if not op.tail_is_zero}
    if len(shifts) > 1:
        raise ValueError("components have incompatible tails")
    s = shifts.pop() if shifts else 0
    blocks, n = _aligned(parts, s)
    inner = np.zeros((2 * (n + s), 2 * n), complex)
    pat = np.zeros((2, 2), complex)
    for (r, c), blk, op in zip([(0, 0), (0, 1), (1, 0), (1, 1)], blocks, parts):
        inner[r::2, c::2] = blk
        pat[r, c] = op.pattern[0, 0]
    block = _pair_unitary(2 * (n + s)) @ inner @ _pair_unitary(2 * n).conj().T
    return FiniteTypeOp(block, 2 * s, PAIR_BASIS @ pat @ PAIR_BASIS.conj().T, "K", "K")


# ---------------------------------------------------------------- inverses etc.
def _pinv(m, rtol=RANK_RTOL):
    if m.size == 0:
        return np.zeros(m.shape[::-1], complex)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    keep = s > max(rtol * s[0], RANK_ATOL) if s.size else np.zeros_like(s, bool)
    return (vh[keep].conj().T / s[keep]) @ u[:, keep].conj().T


def pseudo_inverse(a: FiniteTypeOp, rtol=RANK_RTOL) -> FiniteTypeOp:
    """Moore-Penrose inverse, computed as pinv(block) (+) pinv(tail)."""
    return FiniteTypeOp(_pinv(a.block, rtol), -a.shift, np.linalg.pinv(a.pattern), a.cod, a.dom)


@dataclass(frozen=True)
class Subspace:
    """Finite-dimensional subspace given by orthonormal columns."""

    ambient: str
    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2:
            raise ValueError("vectors must be a matrix with one column per vector")
        gram = v.conj().T @ v
        if np.max(np.abs(gram - np.eye(v.shape[1])), initial=0.0) > 1e-10:
            raise ValueError("subspace vectors are not orthonormal")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def padded(self, n):
        out = np.zeros((max(n, self.vectors.shape[0]), self.dim), complex)
        out[: self.vectors.shape[0]] = self.vectors
        return out

    def projector(self) -> FiniteTypeOp:
        return from_matrix(self.vectors @ self.vectors.conj().T, self.ambient)


def fix_signs(vectors):
    """Make the largest-magnitude entry of each column real and positive."""
    v = np.array(vectors, dtype=complex)
    for j in range(v.shape[1]):
        i = int(np.argmax(np.abs(v[:, j]) - 1e-12 * np.arange(v.shape[0])))
        if abs(v[i, j]) > 0:
            v[:, j] *= abs(v[i, j]) / v[i, j]
    return v


def orthonormal_range(mat, rtol=RANK_RTOL):
    """Orthonormal basis (sign-fixed) of the column space of ``mat``."""
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return np.zeros((mat.shape[0], 0), complex)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > max(rtol * s[0], RANK_ATOL)))
    return fix_signs(u[:, :rank])


def null_space(mat, rtol=RANK_RTOL, atol=0.0):
    """Orthonormal (sign-fixed) basis of the null space of a matrix."""
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    thr = max(rtol * s[0], atol, RANK_ATOL) if s.size else 0.0
    rank = int(np.sum(s > thr))
    return fix_signs(vh[rank:].conj().T)


def kernel_basis(a: FiniteTypeOp) -> Subspace:
    """Orthonormal basis of ker a.

    The tail must be injective; then the kernel lives on the block columns and
    the window C + |t| + 4 (rounded to the period) contains it.
    """
    p = a.period
    if np.linalg.matrix_rank(a.pattern) < p:
        raise ValueError("tail pattern is not injective: the kernel is infinite-dimensional")
    n = _round_up(a.window + abs(a.shift) + 4, p)
    vecs = null_space(a.dense(n))
    return Subspace(a.dom, vecs)


def cokernel_basis(a: FiniteTypeOp) -> Subspace:
    """Orthonormal basis of ker a*."""
    return kernel_basis(adjoint(a))


def intersect(a: np.ndarray, b: np.ndarray, atol=1e-9):
    """Orthonormal basis of the intersection of two spans given by orthonormal columns."""
    n = max(a.shape[0], b.shape[0])
    qa = np.zeros((n, a.shape[1]), complex)
    qa[: a.shape[0]] = a
    qb = np.zeros((n, b.shape[1]), complex)
    qb[: b.shape[0]] = b
    if qa.shape[1] == 0 or qb.shape[1] == 0:
        return np.zeros((n, 0), complex)
    resid = qa - qb @ (qb.conj().T @ qa)
    coeffs = null_space(resid, rtol=0.0, atol=atol)
    return orthonormal_range(qa @ coeffs)


def index(a: FiniteTypeOp) -> int:
    """Fredholm index ind a* = dim ker a* - dim ker a."""
    return cokernel_basis(a).dim - kernel_basis(a).dim


def det_one_plus(x: FiniteTypeOp) -> complex:
    """Determinant of an operator 1 + F with F of finite rank.

    ``x`` itself is the operator 1 + F; it must have identity tail and zero shift.
    """
    if x.shift != 0 or not np.allclose(x.pattern, np.eye(x.period), atol=PATTERN_EPS, rtol=0):
        raise ValueError("determinant requires an identity tail (finite-rank perturbation of 1)")
    if x.window == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(x.block))


def hs_norm(a: FiniteTypeOp) -> float:
    """Hilbert-Schmidt norm of a finite-rank operator."""
    if not a.tail_is_zero:
        raise ValueError("Hilbert-Schmidt norm requested for an operator with nonzero tail")
    return float(np.linalg.norm(a.block))


def rank(a: FiniteTypeOp, rtol=RANK_RTOL) -> int:
    """Rank of the finite-rank part."""
    m = a.finite_rank_part().block
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > max(rtol * s[0], RANK_ATOL)))


def trace(a: FiniteTypeOp) -> complex:
    """Trace of the finite-rank part."""
    f = a.finite_rank_part()
    return complex(np.trace(f.finite_matrix()))


def operator_norm(a: FiniteTypeOp) -> float:
    """Operator norm: the larger of the block norm and the tail norm."""
    blk = np.linalg.norm(a.block, 2) if a.block.size else 0.0
    return float(max(blk, np.linalg.norm(a.pattern, 2)))


def is_zero_op(a: FiniteTypeOp, atol=ATOL) -> bool:
    return a.tail_is_zero and np.max(np.abs(a.block), initial=0.0) <= atol


# --------------------------------------------------------------- Bogoliubov ops
class BogoliubovOp:
    """Real isometry on K with identity tail pattern and even shift.

    The shift equals the Fredholm index ind V* = dim ker V*.
    """

    def __init__(self, op: FiniteTypeOp, check=True, atol=ATOL):
        if op.dom != "K" or op.cod != "K":
            raise ValueError("a Bogoliubov operator acts on K")
        if not np.allclose(op.pattern, np.eye(2), atol=PATTERN_EPS, rtol=0):
            raise ValueError("tail pattern must be the identity")
        if op.shift < 0 or op.shift % 2:
            raise ValueError("unsupported: odd index out of scope" if op.shift % 2 else "negative shift")
        if check:
            imag = np.max(np.abs(op.block.imag), initial=0.0)
            if imag > atol:
                raise ValueError(f"operator does not commute with Gamma (imaginary part {imag:.3e})")
            b = op.block.real
            res = np.max(np.abs(b.T @ b - np.eye(b.shape[1])), initial=0.0)
            if res > atol:
                raise ValueError(f"operator is not isometric (residual {res:.3e})")
        self.op = FiniteTypeOp(op.block.real, op.shift, np.eye(2), "K", "K")

    @classmethod
    def from_block(cls, block, shift, check=True):
        return cls(FiniteTypeOp(np.asarray(block, dtype=float), shift), check=check)

    def __repr__(self):
        return f"BogoliubovOp(window={self.op.window}, index={self.index})"

    def __matmul__(self, other):
        if isinstance(other, BogoliubovOp):
            return BogoliubovOp(compose(self.op, other.op), check=False)
        if isinstance(other, FiniteTypeOp):
            return compose(self.op, other)
        return NotImplemented

    @property
    def index(self) -> int:
        return self.op.shift

    @property
    def m(self) -> int:
        """Half the index: number of independent f-modes in the cokernel."""
        return self.op.shift // 2

    @property
    def block(self):
        return self.op.block.real

    @cached_property
    def components(self):
        return components(self.op)

    def adjoint(self) -> FiniteTypeOp:
        return adjoint(self.op)

    def apply(self, k):
        return self.op.apply(k)


def as_op(x) -> FiniteTypeOp:
    return x.op if isinstance(x, BogoliubovOp) else x


def fredholm_index(v: BogoliubovOp) -> int:
    """ind V* = dim ker V* (equal to the tail shift)."""
    return v.index


def statistical_dimension(v: BogoliubovOp) -> int:
    """d_V = 2^(ind V* / 2)."""
    return 2 ** (v.index // 2)
